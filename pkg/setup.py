from setuptools import setup, find_packages

setup(
    name='influence_games',
    version='0.0.1',
    install_requires=[
        'numpy',
        'scipy',
        'tqdm',
        'pandas',
        'networkx',
        ],
    extras_require={'test': ['pytest']},
    packages=find_packages(exclude=['tests']),
    package_data={
        'influence_games': [
            'config_centrality.json',
            'data/*.net-txt',
            'data/case_studies.json',
            'data/golden/*.csv',
        ]
    },
    entry_points={
        'console_scripts': [
            'compute_centrality=influence_games.cli:compute_command',
            'reproduce_tables=influence_games.cli:reproduce_command',
        ]
    }
)
