import pytest

from fermi_gig.tolerances import Tolerances


def test_defaults_and_overrides():
    t = Tolerances()
    assert t.car == 1e-13 and t.embed_negative == -1e-4
    u = t.with_overrides({"car": 1e-9})
    assert u.car == 1e-9 and t.car == 1e-13
    assert "gig_preserve" in Tolerances.names()
    with pytest.raises(KeyError):
        t.with_overrides({"nope": 1.0})
