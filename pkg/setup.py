import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "spcor._cdkernels_c",
                ["src/spcor/_cdkernels_c.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # The compiled kernels are optional; the pure NumPy fallback is
    # selected at import when the extension is absent.
    extensions = []

setup(ext_modules=extensions)
