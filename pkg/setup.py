import numpy as np
from setuptools import Extension, setup

# The compiled kernels are an optional fast path; the package falls back to
# pure numpy when the extension is unavailable (see partasm.kernels).
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "partasm.kernels._native",
                ["src/partasm/kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps results bit-identical to the
                # numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
