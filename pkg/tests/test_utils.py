"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

import pytest

from stylomorph.utils import MASK64, SplitMix64, derive_seed, pick_index, read_json, write_json


class TestSplitMix64:
    def test_reference_sequence(self):
        rng = SplitMix64(0)
        assert rng.next_u64() == 0xE220A8397B1DCDAF
        assert rng.next_u64() == 0x6E789E6AA1B965F4

    def test_replays(self):
        first, second = SplitMix64(42), SplitMix64(42)
        assert [first.next_u64() for _ in range(5)] == [second.next_u64() for _ in range(5)]

    def test_below(self):
        rng = SplitMix64(9)
        assert all(0 <= rng.below(7) < 7 for _ in range(200))
        with pytest.raises(ValueError):
            rng.below(0)

    def test_random(self):
        rng = SplitMix64(3)
        assert all(0.0 <= rng.random() < 1.0 for _ in range(200))

    def test_shuffle_and_sample(self):
        items = list(range(10))
        rng = SplitMix64(5)
        rng.shuffle(items)
        assert sorted(items) == list(range(10))
        sample = SplitMix64(5).sample(range(10), 3)
        assert len(set(sample)) == 3


class TestDeriveSeed:
    def test_stable(self):
        assert derive_seed("corpus/author00/sorting.mc", 3) == derive_seed("corpus/author00/sorting.mc", 3)

    def test_order_matters(self):
        assert derive_seed(1, 2) != derive_seed(2, 1)
        assert derive_seed("ab") != derive_seed("ba")

    def test_range(self):
        assert 0 <= derive_seed(-1, "x") <= MASK64

    def test_pick_index(self):
        assert pick_index(derive_seed("pair"), 5) == pick_index(derive_seed("pair"), 5)
        assert 0 <= pick_index(123, 5) < 5


class TestJson:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "nested" / "data.json"
        write_json(path, {"name": "author00", "ids": [1, 2]})
        assert read_json(path) == {"name": "author00", "ids": [1, 2]}
