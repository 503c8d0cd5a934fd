"""Build script for the optional compiled scoring kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile must not break installation.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "retune.scoring._ckernel",
                ["src/retune/scoring/_ckernel.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
