from paver.easy import *
from paver.setuputils import setup
import paver.doctools

here = path(__file__).abspath().dirname()

options = environment.options

options(
    minilib=Bunch(
        extra_files=['doctools'],
        versioned_name=False,
        extra_packages=['six']
    ),
    sphinx=Bunch(
        builddir="build",
        sourcedir="source"
    ),
)

setup(
    name="pycartan",
    packages=["pycartan"],
    version="0.1.0",
    description="Cartan quartics of (2,3,5) distributions and their heavenly twistor models",
    python_requires=">=3.8",
    install_requires=["sympy>=1.7", "numpy>=1.19"],
    tests_require=["pytest", "pytest-cov", "hypothesis"],
    entry_points={
        'console_scripts': ['pycartan = pycartan.cli:main'],
    },
)

@task
def lint():
    sh('mypy --strict -p pycartan')
    sh('pylint pycartan')

@task
def test():
    sh('PYTHONPATH={} pytest --cov=./pycartan --cov-branch --cov-report=html --cov-report=term'
       .format(path(__file__).abspath().dirname()))

@task
def quick():
    sh('PYTHONPATH={} pytest -m "not slow"'.format(path(__file__).abspath().dirname()))

@task
@needs('paver.doctools.html')
def html():
    builtdocs = path("docs") / options.sphinx.builddir / "html"
    destdir = path("pycartan") / "docs"
    destdir.rmtree_p()
    builtdocs.move(destdir)
