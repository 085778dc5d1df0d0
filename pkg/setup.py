from setuptools import setup, find_packages

setup(
    name='rubyeval',
    version='0.1.0',
    description='Similarity metrics for evaluating migrated source code',
    packages=find_packages(exclude=['rubyeval.tests']),
    python_requires='>=3.9',
    install_requires=[
        'networkx',
        'numpy',
        'scipy',
        'rapidfuzz',
        'zss',
        'pydantic>=2',
        'pydantic-settings',
        'python-dotenv',
        'fastapi',
        'python-multipart',
    ],
    extras_require={
        'server': ['uvicorn'],
        'test': ['pytest', 'pytest-asyncio', 'httpx'],
    },
    entry_points={
        'console_scripts': ['rubyeval=rubyeval.cli:main'],
    },
)
