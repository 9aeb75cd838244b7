"""Build script: compiles the optional replicator kernel extension.

If the C toolchain or Cython is unavailable the build falls through to a
pure-Python install; the package selects the numpy fallback at import.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "cdsfuse._kernels._replicator",
                ["src/cdsfuse/_kernels/_replicator.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError as exc:  # pragma: no cover
    print(f"cdsfuse: skipping compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
