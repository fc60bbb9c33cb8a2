## Plotly plot subcomponents: line and band shapes for layout.shapes


def abs_line(position, orientation, color='red', width=2, name='abs_line', dash='solid', opacity=1,
             span=(0, 1), span_ref='paper'):
    '''
    Creates a line at a fixed data position. By default it crosses the whole plot,
    irregardless of panning; pass span in data units with span_ref='x' or 'y'
    to draw only a segment.
    To use, add output to layout shapes:
        layout.shapes = [hline(value)]
    Note opacity=0 mean completely transparent
    '''
    if orientation == 'v':
        big, lil = 'x', 'y'
    elif orientation == 'h':
        big, lil = 'y', 'x'
    else:
        raise ValueError('Orientation must be either "v" or "h". You input %s' % str(orientation))

    return {
        'type': 'line',
        big + 'ref': big,
        lil + 'ref': span_ref,
        big + '0': position,
        big + '1': position,
        lil + '0': span[0],
        lil + '1': span[1],
        'opacity': opacity,
        'line': {
            'color': color,
            'width': width,
            'dash': dash
        },
        'name': str(name),
    }


def vline(position, **params):
    ''' Creates vertical line shape'''
    return abs_line(position, orientation='v', **params)


def hline(position, **params):
    ''' Creates horizontal line shape'''
    return abs_line(position, orientation='h', **params)


def addRect(start, end, orientation='V', color='#ff0000', opacity=0.1, name='rect', span=(0, 1), span_ref='paper'):
    ''' This makes a rectangluar background from start til end with shaded color. Useful for highlighting bands'''
    if orientation == 'V':
        xref, yref = 'x', span_ref
        x0, x1 = start, end
        y0, y1 = span
    elif orientation == 'H':
        yref, xref = 'y', span_ref
        y0, y1 = start, end
        x0, x1 = span
    else:
        raise ValueError('Orientation must be either "H" or "V". You input %s' % str(orientation))

    return {
        'type': 'rect',
        'xref': xref,
        'yref': yref,
        'x0': x0,
        'y0': y0,
        'x1': x1,
        'y1': y1,
        'fillcolor': color,
        'opacity': opacity,
        'line': {
            'width': 0,
        },
        'name': str(name),
    }
