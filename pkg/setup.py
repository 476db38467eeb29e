from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("nadsim._scan", ["src/nadsim/_scan.pyx"])],
        language_level=3,
    )
except ImportError:
    # The package works without the compiled kernel; the pure-numpy
    # fallback is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
