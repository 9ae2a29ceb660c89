"""On-disk cache of command output, one JSON file per job."""

import hashlib
import json
import os
import shutil
import tempfile
from pathlib import Path

from aknot.core.formatter import say
from aknot.core.knotio import canonical_code

SUFFIX = ".json"


def cache_key(command, fmt, code, options):
    """sha256 of the canonical JSON of the job.

    ``code`` is keyed in canonical form, so ``"4  6 2"``, ``"4,6,2"`` and
    ``"4 6 2"`` share an entry.
    """
    payload = {
        "command": command,
        "format": fmt,
        "code": canonical_code(fmt, str(code)),
        "options": options,
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ResultCache:
    """Directory of cached output texts keyed by :func:`cache_key`."""

    def __init__(self, directory, verbose=False):
        self.directory = Path(directory).expanduser()
        self.verbose = verbose

    def path(self, key):
        return self.directory / f"{key}{SUFFIX}"

    def load(self, key):
        """Cached text for ``key``, or None on a miss or an unreadable entry."""
        path = self.path(key)
        try:
            text = path.read_text(encoding="utf-8")
            json.loads(text)
        except FileNotFoundError:
            return None
        except (OSError, UnicodeDecodeError, json.JSONDecodeError):
            say(f"Ignoring corrupt cache entry {path.name}", self.verbose, "neu")
            return None
        say(f"Cache hit {key[:12]}", self.verbose)
        return text

    def store(self, key, text):
        """Write ``text`` atomically; a reader never sees a partial file."""
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(text)
            os.replace(tmp, self.path(key))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def clear(self):
        """Remove every entry; returns the number removed."""
        if not self.directory.exists():
            return 0
        count = len(list(self.directory.glob(f"*{SUFFIX}")))
        shutil.rmtree(self.directory)
        return count
