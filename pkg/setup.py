import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hanoi_schreier._kernels",
                ["src/hanoi_schreier/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception:  # no usable Cython: ship the pure-Python kernels only
    ext_modules = []

setup(ext_modules=ext_modules)
