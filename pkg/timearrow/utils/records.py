"""JSON and CSV records
"""
import csv
import io
import json
import numbers

import numpy as np


class ArrayEncoder(json.JSONEncoder):
    '''JSON encoder for numpy arrays, numpy scalars and complex numbers.

    Complex values become ``{"re": .., "im": ..}`` objects.
    '''
    def default(self, o):
        if isinstance(o, np.ndarray):
            return encode_array(o)
        if isinstance(o, (complex, np.complexfloating)):
            return encode_number(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, (np.floating, np.bool_)):
            return o.item()
        if hasattr(o, 'to_record'):
            return o.to_record()
        return super().default(o)


def encode_number(value):
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            return float(value.real)
        return {'re': float(value.real), 'im': float(value.imag)}
    if isinstance(value, numbers.Integral):
        return int(value)
    return float(value)


def encode_array(value):
    '''Nested lists of JSON numbers from an array-like'''
    if isinstance(value, np.ndarray) and value.ndim > 0:
        return [encode_array(v) for v in value]
    if isinstance(value, (list, tuple)):
        return [encode_array(v) for v in value]
    return encode_number(value)


def decode_number(value):
    if isinstance(value, dict):
        return complex(float(value.get('re', 0)), float(value.get('im', 0)))
    if isinstance(value, bool) or not isinstance(value, numbers.Number):
        raise TypeError('not a number: %r' % (value,))
    return value


def decode_sequence(values):
    '''numpy vector from a list of JSON numbers'''
    numbers_ = [decode_number(v) for v in values]
    if any(isinstance(v, complex) for v in numbers_):
        return np.array(numbers_, dtype=complex)
    return np.array(numbers_, dtype=float)


def dumps(data):
    '''Canonical JSON text: sorted keys, two-space indent'''
    return json.dumps(data, cls=ArrayEncoder, sort_keys=True, indent=2) + '\n'


def csv_text(header, rows, metadata=None):
    '''CSV text with optional ``# key=value`` metadata lines on top'''
    buffer = io.StringIO()
    for key in sorted(metadata or ()):
        buffer.write('# %s=%s\n' % (key, metadata[key]))
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def read_csv(text):
    '''Split CSV text into ``(metadata, header, rows)``'''
    metadata = {}
    lines = []
    for line in text.splitlines():
        if line.startswith('#'):
            key, _, value = line[1:].strip().partition('=')
            metadata[key.strip()] = value.strip()
        elif line.strip():
            lines.append(line)
    reader = csv.reader(lines)
    header = next(reader, [])
    return metadata, header, list(reader)


def format_number(value):
    if isinstance(value, (complex, np.complexfloating)):
        if value.imag == 0:
            value = value.real
        else:
            return repr(complex(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)
