from setuptools import setup, find_packages

from manifold_filter_combine import __version__

setup(
    name='manifold-filter-combine',
    version=__version__,
    packages=find_packages(exclude=('tests', 'tests.*', 'examples', 'examples.*')),
    description='Manifold filter-combine networks on point clouds, with a discretization convergence harness',
    license='BSD',
    include_package_data=True,
    zip_safe=False,
    keywords=['graph laplacian', 'spectral filter', 'manifold learning', 'scattering', 'point cloud'],
    classifiers=[
        'Development Status :: 4 - Beta',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires='>=3.7',
    install_requires=[
        'numpy',
        'frontera',
        'w3lib<2',  # frontera 0.8.1 imports w3lib.util.to_native_str, removed in w3lib 2.0
        'scipy>=1.6',
        'matplotlib',
        'msgpack',
    ],
    extras_require={},
    tests_require=['pytest'],
    entry_points={
        'console_scripts': ['mfcn = manifold_filter_combine.cli.main:main'],
    },
)
