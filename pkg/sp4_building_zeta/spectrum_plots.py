### Figures: determinant zeros against the Ramanujan bands, and balls of the building

import math

import numpy as np
import plotly.graph_objs as go

from sp4_building_zeta.plotly_misc import plotOut, _getCols, _extend_range
from sp4_building_zeta.plot_subcomponents import hline, addRect
from sp4_building_zeta.zetaeng import BANDS

STATUSES = ('inside', 'boundary', 'outside', 'trivial')
BAND_WIDTH = 0.8        # share of each operator's column covered by its band


def _records(report):
    ''' Operator -> root records, from a RamanujanReport or its json '''
    if hasattr(report, 'to_json'):
        report = report.to_json()
    return {op: v['roots'] for op, v in report['operators'].items()}


def plot_zero_moduli(report, q=None, plot=False, title=None):
    '''
    Plots log_q |zero| of every zero, one column per operator, with the allowed
    intervals shaded and the allowed single values drawn as segments.
    Zeros at the origin have no modulus and are left out.

    :param report: RamanujanReport, or the dict its to_json gives
    :param q: residue field size, default taken from the report
    '''
    q = q if q is not None else (report.q if hasattr(report, 'q') else report['q'])
    records = _records(report)
    ops = [op for op in BANDS if op in records]
    cols = dict(zip(STATUSES, _getCols(len(STATUSES))))

    points = {s: ([], [], []) for s in STATUSES}
    for i, op in enumerate(ops):
        for r in records[op]:
            z = complex(r['re'], r['im'])
            if z == 0:
                continue
            x, y, txt = points[r['status']]
            x.append(i)
            y.append(math.log(abs(z), q))
            txt.append('%s: %.4g%+.4gj%s' % (op, z.real, z.imag, ' (%s)' % r['source'] if r.get('source') else ''))

    traces = [go.Scatter(x=points[s][0], y=points[s][1], text=points[s][2], mode='markers', name=s,
                         marker={'color': cols[s], 'size': 9, 'symbol': 'x' if s == 'trivial' else 'circle'})
              for s in STATUSES]

    shapes = []
    half = BAND_WIDTH / 2
    for i, op in enumerate(ops):
        for lo, hi in BANDS[op]:
            if lo == hi:
                shapes.append(hline(float(lo), color='#555555', dash='dash', name='%s %s' % (op, lo),
                                    span=(i - half, i + half), span_ref='x'))
            else:
                shapes.append(addRect(float(lo), float(hi), orientation='H', color='#1f77b4', opacity=0.15,
                                      name='%s [%s, %s]' % (op, lo, hi), span=(i - half, i + half), span_ref='x'))

    ys = [y for s in STATUSES for y in points[s][1]] + [float(b) for op in ops for band in BANDS[op] for b in band]
    y_rng = _extend_range(min(ys), max(ys), 0.1) if ys else (-2.5, 0.5)
    layout = go.Layout(title=title or 'Zeros of the determinants, q = %d' % q,
                       xaxis={'tickvals': list(range(len(ops))), 'ticktext': ops, 'range': [-0.5, len(ops) - 0.5]},
                       yaxis={'title': 'log_q |zero|', 'range': list(y_rng)},
                       shapes=shapes,
                       hovermode='closest')
    return plotOut(go.Figure(data=traces, layout=layout), plot)


def _ring_positions(b):
    ''' Vertices on concentric rings, ring k holding the vertices at distance k '''
    rings = {}
    for v in b.vertices:
        rings.setdefault(b.distance[v], []).append(v)
    pos = {}
    for k, vs in rings.items():
        radius = k + 0.5
        for j, v in enumerate(vs):
            angle = 2 * np.pi * j / len(vs) + 0.3 * k
            pos[v] = (radius * np.cos(angle), radius * np.sin(angle))
    return pos


def plot_ball(b, plot=False, title=None):
    '''
    Draws the 1-skeleton of a BuildingBall, vertices coloured by type and
    edges split by edge type.
    '''
    pos = _ring_positions(b)
    traces = []
    for t, dash in ((1, 'solid'), (2, 'dot')):
        x, y = [], []
        for u, v, et in sorted(b.edges, key=lambda e: (e[0].sort_key, e[1].sort_key)):
            if et != t:
                continue
            x += [pos[u][0], pos[v][0], None]
            y += [pos[u][1], pos[v][1], None]
        traces.append(go.Scatter(x=x, y=y, mode='lines', name='type %d edges' % t, hoverinfo='skip',
                                 line={'color': '#999999', 'width': 1, 'dash': dash}))

    cols = _getCols(3)
    for col, vtype in zip(cols, (0, 2, 3)):
        vs = [v for v in b.vertices if v.vtype == vtype]
        traces.append(go.Scatter(x=[pos[v][0] for v in vs], y=[pos[v][1] for v in vs], mode='markers',
                                 name='type %d' % vtype, marker={'color': col, 'size': 8},
                                 text=['distance %d' % b.distance[v] for v in vs]))

    layout = go.Layout(title=title or 'Ball of radius %d, p = %d' % (b.radius, b.p),
                       xaxis={'visible': False}, yaxis={'visible': False, 'scaleanchor': 'x'},
                       hovermode='closest')
    return plotOut(go.Figure(data=traces, layout=layout), plot)
