import datetime
import os
import subprocess

LEVELS = ('alpha', 'beta', 'rc', 'final')
PRE_RELEASE = {'alpha': 'a', 'beta': 'b'}


def get_version(version, filename=None):
    '''Build a PEP 440 version string from a ``VERSION`` tuple.

    Alpha builds with serial ``0`` get a ``.dev`` suffix with the timestamp
    of the current git changeset, when one is available.
    '''
    if len(version) != 5 or version[3] not in LEVELS:
        raise ValueError('bad version tuple %r' % (version,))
    main = '.'.join(str(v) for v in version[:3])
    level, serial = version[3], version[4]
    if level == 'final':
        return main
    if level == 'alpha' and serial == 0:
        changeset = git_changeset(filename)
        if changeset:
            return '%s.dev%s' % (main, changeset)
    return '%s%s%s' % (main, PRE_RELEASE.get(level, level), serial)


def git_changeset(filename=None):
    '''UTC timestamp (YYYYMMDDHHMMSS) of the HEAD commit, or None'''
    cwd = os.path.dirname(os.path.abspath(filename or __file__))
    try:
        out = subprocess.run(
            ['git', 'show', '--pretty=format:%ct', '--quiet', 'HEAD'],
            cwd=cwd, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL,
            universal_newlines=True).stdout
    except OSError:
        return None
    try:
        stamp = int(out.partition('\n')[0])
    except ValueError:
        return None
    when = datetime.datetime.fromtimestamp(stamp, tz=datetime.timezone.utc)
    return when.strftime('%Y%m%d%H%M%S')
