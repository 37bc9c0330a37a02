import setuptools
import codecs
import os


here = os.path.abspath(os.path.dirname(__file__))

with codecs.open(os.path.join(here, "README.md"), encoding="utf-8") as fh:
    long_description = fh.read()


setuptools.setup(
    name='lattice_twisted_zhu',
    version='0.1.0',
    description='Twisted Zhu algebras and theta-twisted modules of lattice vertex operator algebras.',
    long_description_content_type='text/markdown',
    long_description=long_description,
    packages=setuptools.find_packages(where='.'),
    python_requires='>=3.8',
    install_requires=[
        'numpy',
        'pandas',
        'sympy'
    ],
    extras_require={
        'test': ['pytest', 'hypothesis']
    },
    entry_points={
        'console_scripts': ['lattice-twisted-zhu=lattice_twisted_zhu.cli:main']
    }
)
