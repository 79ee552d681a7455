from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mapt/_kernels/_core.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    # No Cython (or no scipy headers for it to cimport): install the
    # pure-Python package; the numpy fallback kernels are selected
    # automatically at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
