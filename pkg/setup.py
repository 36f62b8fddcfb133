from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # build without the compiled kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("fgverify._ckernels", ["src/fgverify/_ckernels.pyx"],
                   optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
