"""Build script: compiles the optional Cython kernels.

The package works without the extension (a pure-Python fallback is
selected at import time), so a failed compile only costs speed.
"""
from setuptools import setup, Extension

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy as np

    ext = Extension(
        "pucci_spectra._kernels._core",
        ["src/pucci_spectra/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize([ext], language_level=3)
except Exception as exc:  # no cython / no compiler: install pure-Python only
    print(f"pucci-spectra: skipping compiled kernels ({exc})")

setup(ext_modules=ext_modules)
