"""Build hook for the optional compiled kernels.

If Cython or a C compiler is missing the package still installs; the
pure-numpy kernels are used at runtime instead.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


def extensions():
    if os.environ.get("FTR_NO_EXTENSION"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "ftrfading._ckernels",
        ["src/ftrfading/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        # Inline complex products; division keeps range-safe scaling.
        extra_compile_args=["-O3", "-fcx-fortran-rules"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
