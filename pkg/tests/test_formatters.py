import csv
import io
import json
import unittest

import numpy as np

from ellipsoid_squeezer.formatters import (
    FORMATTERS,
    BaseFormatter,
    CSVFormatter,
    JSONFormatter,
    to_jsonable,
)


class TestFormatters(unittest.TestCase):

    def setUp(self):
        # Sample sweep report with one failed point
        self.sweep_report = {
            "command": "sweep",
            "status": "fail",
            "exit_code": 2,
            "config": {"seed": 0},
            "result": {
                "summary": {"method": "lemma21", "count": 2, "failed": 1, "min_bound": 0.25},
                "reports": [
                    {
                        "point": [0.0, 0.0, 0.5, 0.0],
                        "bound": 0.25,
                        "method": "lemma21",
                        "trace": {"r": 0.5, "R": 2.0},
                    },
                    {
                        "point": [0.0, 0.0, 1.0, 0.0],
                        "error": {"type": "DomainError", "message": "point lies on the boundary", "exit_code": 2},
                    },
                ],
            },
        }
        self.validate_report = {
            "command": "validate",
            "status": "ok",
            "exit_code": 0,
            "result": {"valid": True, "comparability": {"c1": 0.5, "c2": 1.5}, "weight_violations": []},
        }

    def test_formatter_registry(self):
        # Verify all formatters are registered
        self.assertIn("json", FORMATTERS)
        self.assertIn("csv", FORMATTERS)
        for formatter_class in FORMATTERS.values():
            self.assertTrue(issubclass(formatter_class, BaseFormatter))
            self.assertIsNotNone(formatter_class.extension)

    def test_json_formatter(self):
        output = io.StringIO()
        JSONFormatter().format(self.sweep_report, output)
        text = output.getvalue()

        # Verify the content round-trips with sorted keys
        self.assertEqual(json.loads(text), self.sweep_report)
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"command"'), text.index('"result"'))

    def test_json_is_deterministic(self):
        first, second = io.StringIO(), io.StringIO()
        JSONFormatter().format(self.sweep_report, first)
        JSONFormatter().format(dict(reversed(list(self.sweep_report.items()))), second)
        self.assertEqual(first.getvalue(), second.getvalue())

    def test_numpy_values(self):
        output = io.StringIO()
        JSONFormatter().format({"a": np.float64(0.5), "b": np.array([1, 2]), "c": np.bool_(True)}, output)
        self.assertEqual(json.loads(output.getvalue()), {"a": 0.5, "b": [1, 2], "c": True})
        self.assertEqual(to_jsonable(1 + 2j), [1.0, 2.0])
        with self.assertRaises(TypeError):
            to_jsonable(object())

    def test_csv_bound_rows(self):
        output = io.StringIO()
        CSVFormatter().format(self.sweep_report, output)
        rows = list(csv.reader(io.StringIO(output.getvalue())))

        # Header, then one row per point
        self.assertEqual(rows[0], ["re_1", "im_1", "re_2", "im_2", "bound", "method",
                                   "lambda", "delta", "d", "r", "R", "error"])
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[1][4], "0.25")
        self.assertEqual(rows[1][9], "0.5")
        self.assertEqual(rows[2][-1], "point lies on the boundary")

    def test_csv_single_bound(self):
        report = {"result": {"point": [0.0, 0.0, 0.1, 0.0], "bound": 0.4, "method": "extreme-point",
                             "trace": {"lambda": 0.1, "delta": 0.8, "d": 2.0}}}
        output = io.StringIO()
        CSVFormatter().format(report, output)
        rows = list(csv.reader(io.StringIO(output.getvalue())))
        self.assertEqual(len(rows), 2)
        self.assertEqual(rows[1][6:9], ["0.1", "0.8", "2.0"])

    def test_csv_flattened_report(self):
        output = io.StringIO()
        CSVFormatter().format(self.validate_report, output)
        rows = list(csv.reader(io.StringIO(output.getvalue())))

        # Non-bound reports become key, value pairs
        self.assertEqual(rows[0], ["key", "value"])
        pairs = dict(rows[1:])
        self.assertEqual(pairs["result.comparability.c1"], "0.5")
        self.assertEqual(pairs["result.valid"], "True")
        self.assertEqual(pairs["command"], "validate")


if __name__ == '__main__':
    unittest.main()
