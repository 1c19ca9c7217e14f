"""Build script: compiles the optional fast kernel extension.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile downgrades to a warning instead of
aborting the install.  -ffp-contract=off keeps the compiled kernel
bit-compatible with the pure-Python reference (no FMA contraction).
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: fast kernel build skipped ({exc}); "
                  "falling back to the pure-Python kernel", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-Python kernel", file=sys.stderr)


if sys.platform == "win32":
    compile_args = []
else:
    compile_args = ["-O2", "-ffp-contract=off"]

extensions = [
    Extension(
        "kwrist._kernels_c",
        ["src/kwrist/_kernels_c.pyx"],
        extra_compile_args=compile_args,
    )
]

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
except ImportError:
    print("warning: Cython not available; installing without the fast kernel",
          file=sys.stderr)
    ext_modules = []

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)
