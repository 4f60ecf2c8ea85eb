import pytest

from danmaku_highlights.corpus import Comment, CommentStream

_verdicts = []


def stream_of(rows, video_id="v"):
    """rows: (time, tokens-or-text[, id]) tuples."""
    comments = []
    for i, row in enumerate(rows):
        t, toks = row[0], row[1]
        cid = row[2] if len(row) > 2 else i
        toks = tuple(toks.split()) if isinstance(toks, str) else tuple(toks)
        comments.append(Comment(id=cid, video_id=video_id, time_s=float(t), raw_text=" ".join(toks), tokens=toks))
    return CommentStream(video_id, tuple(comments))


@pytest.fixture
def make_stream():
    return stream_of


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _verdicts.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _verdicts:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
