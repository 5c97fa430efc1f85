import json

import pytest

import convac

CONVPOOL_B5_H32 = {
    "M": 64,
    "H": 32,
    "layers": [
        layer
        for _ in range(5)
        for layer in ({"R": 5, "S": 1, "D": 128}, {"R": 2, "S": 2, "D": 128})
    ],
}


def test_analyze_reports_the_bound():
    report = convac.analyze(CONVPOOL_B5_H32)
    assert report["collapsing"] is True
    assert report["non_overlapping"] is False
    assert report["bound"]["best"]["base"] == 64
    assert report["bound"]["best"]["exponent"] == 32
    assert report["bound"]["best"]["value"] == str(64**32)
    assert report["conv_pool"]["B"] == 5


def test_receptive_field_arithmetic():
    arch = json.dumps(CONVPOOL_B5_H32)
    assert [convac.total_stride(arch, l) for l in (1, 3, 5)] == [1, 2, 4]
    assert [convac.total_receptive(arch, l) for l in (1, 3, 5)] == [5, 14, 32]
    got = convac.alpha_min_receptive(arch, 5, 16)
    assert got["feasible"] and got["value"] == 17


def test_conv_pool_bound_reference_point():
    bound = convac.conv_pool_bound(5, 32, 64)
    assert bound["exact_exponent"] == 32
    assert int(bound["value"]) == 64**32
    assert int(bound["value"]) >= 64**20
    assert convac.vgg_effective_b(2, 3) == 5


def test_exact_rank_kernel():
    assert convac.rank_exact(2, 2, ["1", "1/2", "2", "3"]) == 2
    assert convac.rank_exact(2, 2, ["1", "1/2", "2", "1/1"]) == 1
    assert convac.rank_exact(2, 2, ["1", "2", "1/2", "1"]) == 1


def test_claim3_rank_fixture():
    got = convac.claim3_rank(2, 2, 2, 1, 2)
    assert got["rank"] == 4 and got["match"]


def test_theorem3_rank_fixture():
    side_p = [(0, 0), (1, 1)]
    side_q = [(0, 1), (1, 0)]
    got = convac.theorem3_rank(2, 2, side_p, side_q)
    assert got["rank"] == 4 and got["match"]


def test_random_rank_respects_the_non_overlapping_bound():
    arch = json.dumps(
        {"M": 2, "H": 4, "layers": [{"R": 2, "S": 2, "D": 3}, {"R": 2, "S": 2, "D": 2}]}
    )
    assert convac.random_rank(arch, seed=5) <= 3


def test_cap_is_enforced():
    arch = json.dumps({"M": 2, "H": 4, "layers": [{"R": 4, "S": 4, "D": 1}]})
    with pytest.raises(RuntimeError):
        convac.random_rank(arch, seed=1, cap=16)


def test_verify_suite_prop2():
    result = convac.verify_suite("prop2")
    assert result["pass"] is True
    assert any(case["name"] == "m64-b5-h32-at-least-64pow20" for case in result["cases"])
