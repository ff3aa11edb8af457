"""Build script: compiles the optional CDCL kernel extension.

The package works without the extension (pure-Python kernel is selected at
import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "diagfp.satcore._ckernel",
            ["src/diagfp/satcore/_ckernel.pyx"],
            language="c++",
            extra_compile_args=["-O2"],
        )],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on toolchain
    import sys

    print(f"warning: skipping compiled kernel ({exc!r}); "
          "pure-Python fallback will be used", file=sys.stderr)

setup(ext_modules=ext_modules)
