from Cython.Build import cythonize
from setuptools import Extension, setup

# The kernel uses typed memoryviews and libc math only (no numpy C-API),
# so no include dirs are needed.
extensions = [
    Extension(
        "cohroof._kernels._core",
        ["src/cohroof/_kernels/_core.pyx"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        language_level="3",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
)
