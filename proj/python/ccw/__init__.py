"""Python access to the ccw contact toolkit."""
import json

try:
    from ._ccw import *  # noqa: F401,F403
    from . import _ccw
except ImportError:  # build tree: _ccw sits next to the package, not inside it
    import _ccw
    from _ccw import *  # noqa: F401,F403


def run(text, timing=False, seed=0, base_dir=""):
    """Run a session; returns (exit_code, list of report dicts)."""
    code, out = _ccw.run_session(text, timing, seed, str(base_dir))
    return code, json.loads(out)
