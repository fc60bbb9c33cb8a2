import plotly.graph_objs as go
import pytest

from sp4_building_zeta.latticegeo import ball
from sp4_building_zeta.zetaeng import merge_spectra, spectrum_roots, ramanujan_classify
from sp4_building_zeta.plot_subcomponents import abs_line, hline, vline, addRect
from sp4_building_zeta.plotly_misc import _getCols, _extend_range
from sp4_building_zeta.spectrum_plots import STATUSES, plot_zero_moduli, plot_ball


def _report(q=3):
    spectra = merge_spectra(spectrum_roots('I', None, q, x1=1j, s=1), spectrum_roots('IVd', 1, q))
    spectra['A'] = list(spectra['A']) + [0.3]
    return ramanujan_classify(spectra, q)


# ---------------------------------------------------------
# Subcomponents
# ---------------------------------------------------------
def test_shapes():
    s = hline(-1.5, span=(0.6, 1.4), span_ref='x')
    assert (s['y0'], s['y1'], s['x0'], s['x1'], s['xref']) == (-1.5, -1.5, 0.6, 1.4, 'x')
    assert vline(2)['yref'] == 'paper'
    r = addRect(-2, -1, orientation='H')
    assert (r['y0'], r['y1'], r['xref']) == (-2, -1, 'paper')
    with pytest.raises(ValueError):
        addRect(0, 1, orientation='D')
    with pytest.raises(ValueError):
        abs_line(0, 'd')


def test_colours_and_ranges():
    assert len(_getCols(2)) == 2
    assert len(_getCols(4)) == 4
    assert len(_getCols(20)) == 20
    assert _extend_range(0, 10, 0.1) == (-1, 11)


# ---------------------------------------------------------
# Figures
# ---------------------------------------------------------
def test_zero_moduli_figure():
    report = _report()
    fig = plot_zero_moduli(report)
    assert isinstance(fig, go.Figure)
    assert [t.name for t in fig.data] == list(STATUSES)
    kinds = [s.type for s in fig.layout.shapes]
    assert kinds.count('rect') == 2 and kinds.count('line') == 4
    assert len(fig.data[STATUSES.index('outside')].x) == 1
    assert len(fig.data[STATUSES.index('trivial')].x) > 0


def test_zero_moduli_from_json():
    out = _report().to_json()
    fig = plot_zero_moduli(out, q=3, title='zeros')
    assert fig.layout.title.text == 'zeros'
    assert list(fig.layout.xaxis.ticktext) == ['A', 'LP1', 'LP2', 'LI']


def test_ball_figure():
    b = ball(1, 2)
    fig = plot_ball(b)
    assert [t.name for t in fig.data] == ['type 1 edges', 'type 2 edges', 'type 0', 'type 2', 'type 3']
    assert sum(len(t.x) for t in fig.data[2:]) == len(b.vertices)
    assert sum(len(t.x) for t in fig.data[:2]) == 3 * len(b.edges)
