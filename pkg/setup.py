from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "faultchain._kernels._ct",
                ["src/faultchain/_kernels/_ct.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)
