# In-repository shim: `import pavlovpp` without installing the distribution.

from src import *  # noqa: F401,F403
from src import __version__, cli, library  # noqa: F401
