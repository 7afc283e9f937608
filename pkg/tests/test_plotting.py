from polyfeq.plotting import degree_figure


def test_degree_figure_handles_special_degrees(tmp_path):
    report = {
        "equation": {"name": "demo"},
        "degrees": [
            {"unknown": "f", "max": 2},
            {"unknown": "g", "max": "minus-infinity"},
            {"unknown": "h", "max": "not-polynomial"},
        ],
        "claims": [{"claim": "degree f <= 2", "bound": 2, "holds": True}, {"claim": "degree h <= 1", "bound": 1, "holds": False}],
    }
    out = degree_figure(report, tmp_path / "fig.png")
    assert out.exists() and out.stat().st_size > 1000
