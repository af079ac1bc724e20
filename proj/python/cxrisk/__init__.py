"""Complex risk statistics built from a simple statistic and a clustering function.

Component vectors are plain lists of floats; ``float('inf')`` stands for a
+inf risk value.
"""

import json as _json
import os as _os

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_config_json as _run_config_json


def run(config, base_dir=None, timings=False):
    """Run a config (dict, JSON text or path) and return ``(report, exit_code)``.

    Relative input paths resolve against ``base_dir``, or the config file's
    directory when a path is given.
    """
    if isinstance(config, dict):
        text = _json.dumps(config)
    elif isinstance(config, (str, _os.PathLike)) and _os.path.isfile(config):
        with open(config, encoding="utf-8") as fh:
            text = fh.read()
        if base_dir is None:
            base_dir = _os.path.dirname(_os.path.abspath(config))
    else:
        text = str(config)
    report, code = _run_config_json(text, base_dir or "", timings)
    return _json.loads(report), code
