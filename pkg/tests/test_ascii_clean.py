"""Source files must be pure ASCII; reports and diagnostics go to cp1252 consoles too."""
import pathlib
import re

NON_ASCII = re.compile(rb'[^\x00-\x7F]')

ROOT = pathlib.Path(__file__).parent.parent


def non_ascii_lines(base):
    for path in sorted(base.rglob("*.py")):
        for lineno, line in enumerate(path.read_bytes().splitlines(), 1):
            if NON_ASCII.search(line):
                yield f"{path.relative_to(ROOT)}:{lineno}: {line!r}"


def test_package_is_pure_ascii():
    bad = list(non_ascii_lines(ROOT / "src" / "sensor_evidence"))
    assert not bad, "non-ASCII chars in source:\n  " + "\n  ".join(bad)


def test_tests_are_pure_ascii():
    bad = list(non_ascii_lines(ROOT / "tests"))
    assert not bad, "non-ASCII chars in tests:\n  " + "\n  ".join(bad)
