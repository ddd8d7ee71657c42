#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import find_packages, setup

import corrwalk

setup(
    name='corrwalk',
    version=corrwalk.__version__,
    description='Random walks and branching processes in correlated Gaussian environments.',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    author='Pat Daburu',
    author_email='pat@daburu.net',
    license='MIT',
    packages=find_packages(exclude=['tests', 'examples', 'docs']),
    python_requires='>=3.6',
    install_requires=[
        'insensitive_dict>=1.0.0',
        'numpy>=1.17',
        'scipy>=1.4'
    ],
    entry_points={
        'console_scripts': [
            'corrwalk=corrwalk.cli:main'
        ]
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics'
    ]
)
