"""Build the optional compiled sampling kernels.

The package works without them: ``faccum.kernels`` falls back to the
pure-Python implementation when the extension is missing.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FACCUM_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "faccum._kernels",
                    ["src/faccum/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # bit-identical doubles with the Python fallback
                    extra_compile_args=["-O2", "-ffp-contract=off"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
