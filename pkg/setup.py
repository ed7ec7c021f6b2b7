"""Build script for the optional compiled kernel.

The package works without it: ``fermi_gig.matkernel`` falls back to a
pure-Python implementation when ``fermi_gig._jacobi`` cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("FERMI_GIG_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "fermi_gig._jacobi",
                    ["src/fermi_gig/_jacobi.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
