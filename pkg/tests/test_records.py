import json
import unittest

import numpy as np

from timearrow import VERSION, __version__
from timearrow.utils.records import (csv_text, decode_number,
                                     decode_sequence, dumps, encode_array,
                                     format_number, read_csv)
from timearrow.utils.version import get_version


class TestJson(unittest.TestCase):

    def test_arrays(self):
        data = {'b': np.array([[1.0, 2.0], [3.0, 4.5]]), 'a': np.int64(3)}
        text = dumps(data)
        self.assertTrue(text.endswith('}\n'))
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(json.loads(text),
                         {'a': 3, 'b': [[1.0, 2.0], [3.0, 4.5]]})

    def test_complex(self):
        values = np.array([1 + 0j, 0.5 - 2j])
        self.assertEqual(encode_array(values), [1.0, {'re': 0.5, 'im': -2.0}])
        again = decode_sequence(json.loads(dumps(values)))
        self.assertEqual(again.dtype, complex)
        np.testing.assert_array_equal(again, values)

    def test_decode(self):
        self.assertEqual(decode_number({'re': 1, 'im': 2}), 1 + 2j)
        self.assertEqual(decode_number(2.5), 2.5)
        self.assertRaises(TypeError, decode_number, 'x')
        self.assertRaises(TypeError, decode_number, True)
        self.assertEqual(decode_sequence([1, 2]).dtype, float)

    def test_unknown_type(self):
        self.assertRaises(TypeError, dumps, {'a': object()})


class TestCsv(unittest.TestCase):

    def test_round_trip(self):
        text = csv_text(['k', 'value'], [(0, 1.5), (1, np.float64(0.25))],
                        {'seed': 3, 'model': 'ma'})
        self.assertTrue(text.startswith('# model=ma\n# seed=3\nk,value\n'))
        metadata, header, rows = read_csv(text)
        self.assertEqual(metadata, {'model': 'ma', 'seed': '3'})
        self.assertEqual(header, ['k', 'value'])
        self.assertEqual(rows, [['0', '1.5'], ['1', '0.25']])

    def test_format_number(self):
        self.assertEqual(format_number(0.1), '0.1')
        self.assertEqual(format_number(np.int32(4)), '4')
        self.assertEqual(format_number(2 + 0j), '2.0')
        self.assertEqual(format_number(1j), '1j')
        self.assertEqual(format_number('bwd'), 'bwd')


class TestVersion(unittest.TestCase):

    def test_final(self):
        self.assertEqual(get_version((0, 1, 0, 'final', 0)), '0.1.0')
        self.assertEqual(__version__, get_version(VERSION))

    def test_pre_release(self):
        self.assertEqual(get_version((1, 2, 3, 'beta', 2)), '1.2.3b2')
        self.assertEqual(get_version((1, 2, 3, 'rc', 1)), '1.2.3rc1')
        self.assertEqual(get_version((1, 2, 3, 'alpha', 1)), '1.2.3a1')
        self.assertTrue(get_version((1, 2, 3, 'alpha', 0))
                        .startswith('1.2.3'))

    def test_bad(self):
        self.assertRaises(ValueError, get_version, (1, 2, 3, 'gamma', 0))
        self.assertRaises(ValueError, get_version, (1, 2))
