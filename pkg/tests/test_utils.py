import json
import os
import tempfile
import unittest

import numpy as np

from ellipsoid_squeezer.exceptions import DimensionError, SpecError
from ellipsoid_squeezer.utils import (
    as_point,
    interleave,
    load_json_file,
    parse_float_list,
    parse_point,
    seed_record,
    spawn_seeds,
    to_complex,
    to_real,
)

from tests.fixtures import cleanup_spec_dir, create_spec_dir


class TestSpecFiles(unittest.TestCase):

    def setUp(self):
        # Create a temporary directory for spec files
        self.temp_dir = create_spec_dir()

    def tearDown(self):
        if hasattr(self, 'temp_dir') and os.path.exists(self.temp_dir):
            cleanup_spec_dir(self.temp_dir)

    def test_load_json_file(self):
        data = load_json_file(os.path.join(self.temp_dir, "ball.json"))
        self.assertEqual(data["m"], [1])
        self.assertEqual(data["n"], 2)

    def test_malformed_json(self):
        path = os.path.join(self.temp_dir, "broken.json")
        with open(path, "w") as f:
            f.write('{"m": [1],\n "terms": [}')

        # Verify line and column are reported
        with self.assertRaises(SpecError) as ctx:
            load_json_file(path)
        self.assertEqual(ctx.exception.details["line"], 2)
        self.assertIn("column", ctx.exception.message)
        self.assertEqual(ctx.exception.exit_code, 1)

    def test_missing_file(self):
        with self.assertRaises(SpecError):
            load_json_file(os.path.join(self.temp_dir, "absent.json"))

    def test_top_level_must_be_object(self):
        path = os.path.join(self.temp_dir, "list.json")
        with open(path, "w") as f:
            json.dump([1, 2], f)
        with self.assertRaises(SpecError):
            load_json_file(path)


class TestPointEncoding(unittest.TestCase):

    def test_parse_point(self):
        self.assertEqual(parse_point("0.1, 0.2,0,-1"), (0.1 + 0.2j, -1j))

    def test_parse_point_errors(self):
        with self.assertRaises(SpecError):
            parse_point("0.1,0.2,0.3")
        with self.assertRaises(SpecError):
            parse_point("a,b")
        with self.assertRaises(SpecError):
            parse_point("")

    def test_parse_float_list(self):
        self.assertEqual(parse_float_list("0.5,0.2, 0.1"), [0.5, 0.2, 0.1])
        with self.assertRaises(SpecError):
            parse_float_list("0.5,x")

    def test_interleave(self):
        z = np.array([1 + 2j, -3j])
        self.assertEqual(interleave(z), [1.0, 2.0, 0.0, -3.0])
        self.assertEqual(interleave([0.5]), [0.5, 0.0])

    def test_real_representation(self):
        z = np.array([[1 + 2j, 3 - 4j], [0.5j, 1.0]])
        np.testing.assert_array_equal(to_real(z)[0], [1, 3, 2, -4])
        np.testing.assert_array_equal(to_complex(to_real(z)), z)

    def test_as_point(self):
        self.assertEqual(as_point([1, 2], 2).dtype, complex)
        with self.assertRaises(DimensionError):
            as_point([1, 2, 3], 2)


class TestSeeds(unittest.TestCase):

    def test_spawn_is_deterministic(self):
        first = [np.random.default_rng(s).random() for s in spawn_seeds(5, 3)]
        second = [np.random.default_rng(s).random() for s in spawn_seeds(5, 3)]

        # Same parent gives the same independent children
        self.assertEqual(first, second)
        self.assertEqual(len(set(first)), 3)

    def test_spawn_from_sequence(self):
        parent = np.random.SeedSequence(9)
        children = spawn_seeds(parent, 2)
        self.assertEqual(children[0].spawn_key, (0,))
        grandchildren = spawn_seeds(children[1], 2)
        self.assertEqual(grandchildren[1].spawn_key, (1, 1))

    def test_seed_record(self):
        self.assertEqual(seed_record(4), 4)
        child = spawn_seeds(4, 2)[1]
        record = seed_record(child)
        self.assertEqual(record, {"entropy": 4, "spawn_key": [1]})
        json.dumps(record)


if __name__ == '__main__':
    unittest.main()
