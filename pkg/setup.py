#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# This code is distributed under the terms and conditions
# from the Apache License, Version 2.0
#
# http://opensource.org/licenses/apache2.0.php

"""
Run with:

python ./setup.py install
"""

import os
import io

from setuptools import setup


def read(fname):
    path = os.path.join(os.path.dirname(__file__), fname)
    return io.open(path, encoding='utf8').read()


setup(
    name='pavlovpp',
    version='0.1.0',
    description='Pavlovian population protocols: derive them from games, recognize them, verify what they compute.',
    long_description=read('README.rst'),

    packages=['pavlovpp'],
    package_dir={'pavlovpp': 'src'},
    python_requires='>=3.8',
    install_requires=[
        'networkx>=2.6',
        'numpy>=1.17',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis', 'coverage', 'flake8'],
        'bench': ['pytest-benchmark'],
    },
    entry_points={
        'console_scripts': ['pavlovpp=pavlovpp.cli:main'],
    },

    keywords='population protocols, game theory, win-stay lose-shift, model checking',

    license='Apache 2.0',
    platforms='any',

    classifiers=[  # from http://pypi.python.org/pypi?%3Aaction=list_classifiers
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
