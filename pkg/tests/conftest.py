import pytest

from cuephrase.corpus import loads

SAMPLE_CSV = (
    "p_len,p_pos,i_len,i_pos,i_comp,accent,accent_abs,cue_prec,cue_succ,"
    "orth_prec,orth_prec_abs,orth_succ,orth_succ_abs,pos,token,class\n"
    "9,1,1,1,only,H*+L,complex,false,true,paragraph,true,false,false,adverb,now,discourse\n"
    "9,2,8,1,other,H*,H*,true,false,false,false,false,false,adverb,now,sentential\n"
)

@pytest.fixture
def sample_rows():
    return loads(SAMPLE_CSV)


@pytest.fixture
def sample_csv():
    return SAMPLE_CSV


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = _marks.get(report.nodeid)
    if crit is None:
        return
    prev = _criteria.get(crit, True)
    _criteria[crit] = prev and report.outcome == "passed"


_marks = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _marks[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), ok in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}")
