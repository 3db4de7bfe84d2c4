from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cspcount._ckernel", ["src/cspcount/_ckernel.pyx"])],
        language_level="3",
    )
except ImportError:
    # The package falls back to the pure-Python kernel at import time.
    pass

setup(ext_modules=ext_modules)
