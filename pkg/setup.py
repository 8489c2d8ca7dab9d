"""Build hook for the optional compiled recurrence kernels.

The package is fully functional without the extension (a pure-Python
twin of the kernels is selected at import time), so a failed compile
only costs speed, never correctness.
"""

import os

from setuptools import Extension, setup

PYX = "src/anirabi/_kernels_cy.pyx"

extensions = []
if os.path.exists(PYX):
    try:
        import numpy
        from Cython.Build import cythonize

        extensions = cythonize(
            [
                Extension(
                    "anirabi._kernels_cy",
                    [PYX],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=extensions)
