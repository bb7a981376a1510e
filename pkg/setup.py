"""Build the optional compiled kernels.

The package works without them: ``complex_omp._backend`` falls back to the
numpy kernels when the extension is missing. Set ``COMPLEX_OMP_NO_EXT=1`` to
skip the build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("COMPLEX_OMP_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "complex_omp._ckernels",
                    ["src/complex_omp/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
