import io
import os
import sys

from setuptools import setup

ROOT = os.path.dirname(__file__)


# noinspection PyUnresolvedReferences,PyPackageRequirements
def get_version():
    sys.path.insert(0, "anchoring")
    import version
    return version.__version__


with io.open(os.path.join(ROOT, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name="colloid-anchoring",
    packages=["anchoring"],
    version=get_version(),
    description='Limiting surface anchoring energy of colloids in a nematic liquid crystal',
    long_description=long_description,
    long_description_content_type='text/markdown',
    python_requires='>=3.7',
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
    ],
    extras_require={
        'tests': ['pytest>=6', 'hypothesis>=5'],
    },

    classifiers=[
        'Development Status :: 3 - Beta',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'Topic :: Scientific/Engineering :: Mathematics',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
    ],

    keywords='liquid crystal colloid anchoring landau-de gennes',

    entry_points={
        'console_scripts': [
            'anchoring=anchoring.cli:main',
        ]
    },
)
