import csv
import json
import math
import os
import shutil
import sys

import numpy as np

from anchoring.common import InputError, Direction


def print_table(headers, data, out=None):
    """ Print a table in terminal, properly padded

    :param headers: Table headers
    :param data: Table data
    :param out: Stream to print to, stdout by default
    :type headers: list[str]
    :type data: list[list]
    """
    out = out or sys.stdout
    width = shutil.get_terminal_size((120, 24)).columns

    data = [[str(c) for c in row] for row in data]
    sizes = [max(map(len, col)) for col in zip(headers, *data)]  # Find optimal column size
    columns = ['%%-%ds' % s for s in sizes]

    # Pad last column with leftover space
    out_len = ' | '.join(columns[:-1]) % tuple(headers[:-1])
    free_space = max(sizes[-1], min(32, width - 3 - len(out_len)))
    columns[-1] = '%%-%ds' % free_space
    columns_format = ' | '.join(columns)
    header = columns_format % tuple(headers)

    out.write(header.rstrip() + '\n')
    out.write('=' * len(header.rstrip()) + '\n')

    for row in data:
        out.write((columns_format % tuple(row)).rstrip() + '\n')


def batch(iterable, n=1):
    """ Split a sequence into consecutive batches of at most n items

    :param iterable: sequence we want to split
    :param n: size of a batch
    :type iterable: [list|tuple|numpy.ndarray]
    :type n: int
    :return: Input sequence split into batches
    """
    size = len(iterable)
    for ndx in range(0, size, n):
        yield iterable[ndx:min(ndx + n, size)]


def format_float(value):
    """ Locale independent, reproducible float formatting for CSV files

    :type value: float
    :rtype: str
    """
    return '%.12g' % value


def write_csv(path, headers, rows, comments=()):
    """ Write rows to a CSV file, or to stdout when path is None or '-'.

    :param path: Output file
    :param headers: Column names
    :param rows: Iterable of rows; floats are formatted with :func:`format_float`
    :param comments: Lines written first, prefixed by '#'
    :type path: str
    :type headers: list[str]
    """
    def _write(stream):
        for line in comments:
            stream.write('# %s\n' % line)
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(headers)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])

    if path in (None, '-'):
        _write(sys.stdout)
        return

    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, 'w', newline='') as out:
        _write(out)


def dumps_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Direction):
        return list(obj)
    raise TypeError('Object of type %s is not JSON serializable' % type(obj).__name__)


def parse_vector(arg):
    """ Parse "x,y,z" into a Direction

    :type arg: str
    :rtype: Direction
    """
    try:
        values = [float(v) for v in arg.split(',')]
    except ValueError:
        raise InputError('Unable to parse direction: %s' % arg)
    if len(values) != 3:
        raise InputError('Direction needs exactly 3 components: %s' % arg)
    return Direction.of(values)


def parse_grid(arg):
    """ Parse a scan grid "name:start:stop:count" (e.g. n1:-0.99:0.99:48) or "name=v1,v2,..."

    :type arg: str
    :return: parameter name and coordinate values
    :rtype: tuple[str, numpy.ndarray]
    """
    try:
        if '=' in arg:
            name, values = arg.split('=', 1)
            return name.strip(), np.array([float(v) for v in values.split(',')])

        name, start, stop, count = arg.split(':')
        return name.strip(), np.linspace(float(start), float(stop), int(count))
    except ValueError:
        raise InputError('Unable to parse grid: %s' % arg)


def fsum_rows(values):
    """ Compensated column sums of an (N, k) array; the result does not depend on summation order.

    :type values: numpy.ndarray
    :rtype: numpy.ndarray
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return math.fsum(values)
    return np.array([math.fsum(col) for col in values.T])
