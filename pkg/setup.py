from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "seqlean._kernel_c",
        ["src/seqlean/_kernel_c.pyx"],
        extra_compile_args=["-O2"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
