"""Builds the optional compiled kernel; the package works without it."""
from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/wallcross/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    pass


class OptionalBuildExt(build_ext):
    """Skip the extension when no compiler is available; the pure kernel takes over."""

    def run(self):
        try:
            super().run()
        except Exception as e:  # pragma: no cover
            print(f"warning: compiled kernel not built ({e})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as e:  # pragma: no cover
            print(f"warning: compiled kernel not built ({e})")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
