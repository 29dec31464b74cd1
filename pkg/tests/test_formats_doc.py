"""The format documentation is executable: every fenced sample whose first
line is a `$ racklat ...` command must reproduce byte for byte."""

import re
import shlex
from pathlib import Path

import pytest

from racklat.cli import run_cli

DOC = Path(__file__).resolve().parent.parent / "docs" / "formats.md"

FENCE = re.compile(r"^```[a-z]*\n(\$ racklat [^\n]*)\n(.*?)^```$",
                   re.MULTILINE | re.DOTALL)


def doc_samples():
    text = DOC.read_text()
    out = []
    for m in FENCE.finditer(text):
        argv = shlex.split(m.group(1)[len("$ racklat "):])
        out.append((m.group(1), argv, m.group(2)))
    return out


SAMPLES = doc_samples()


def test_doc_has_the_expected_sample_count():
    # one per documented command surface; update when the doc grows
    assert len(SAMPLES) == 10


@pytest.mark.parametrize("title,argv,expected",
                         SAMPLES, ids=[s[0][2:40] for s in SAMPLES])
def test_doc_sample_reproduces(capsys, title, argv, expected):
    code = run_cli(argv)
    out = capsys.readouterr().out
    assert code == 0, f"{title} exited {code}"
    assert out == expected
