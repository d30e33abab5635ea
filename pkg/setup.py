import os

from setuptools import setup, find_packages

import timearrow


def read(name):
    filename = os.path.join(os.path.dirname(__file__), name)
    with open(filename) as fp:
        return fp.read()


def requirements(name):
    install_requires = []
    dependency_links = []

    for line in read(name).split('\n'):
        if line.startswith('-e '):
            link = line[3:].strip()
            if link == '.':
                continue
            dependency_links.append(link)
            line = link.split('=')[1]
        line = line.strip()
        if line and not line.startswith('#'):
            install_requires.append(line)

    return install_requires, dependency_links


meta = dict(
    version=timearrow.__version__,
    description=timearrow.__doc__,
    name='timearrow',
    zip_safe=False,
    license='BSD',
    long_description=read('README.rst'),
    install_requires=requirements('requirements.txt')[0],
    extras_require={'dev': requirements('requirements-dev.txt')[0]},
    packages=find_packages(include=['timearrow', 'timearrow.*']),
    scripts=['bin/timearrow.py'],
    entry_points={
        'console_scripts': ['timearrow = timearrow.cli:main']
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics']
)


if __name__ == '__main__':
    setup(**meta)
