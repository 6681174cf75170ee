import numpy as np
import pytest

from lfdepth.core import DisparityRange, LoadError
from lfdepth.scene import (
    load_scene,
    parse_flat_config,
    per_view_range_to_full,
    write_scene,
)
from lfdepth.synthetic import LayerSpec, SyntheticSceneSpec


def _spec(n=3, m=3, size=24, d=0.5):
    return SyntheticSceneSpec(
        n=n, m=m, width=size, height=size,
        layers=(LayerSpec(d),), disp_min=-1.0, disp_max=1.0,
    )


class TestRangeMapping:
    def test_symmetric_per_view_range(self):
        assert per_view_range_to_full(-2.0, 2.0, 9) == DisparityRange(16, 16)

    def test_outward_rounding(self):
        assert per_view_range_to_full(-0.3, 1.1, 5) == DisparityRange(2, 5)

    def test_one_sided_range(self):
        assert per_view_range_to_full(0.0, 2.0, 9) == DisparityRange(0, 16)

    def test_degenerate_range_widened(self):
        assert per_view_range_to_full(0.0, 0.0, 9) == DisparityRange(0, 1)


class TestFlatConfig:
    def test_parses_keys_and_skips_noise(self, tmp_path):
        p = tmp_path / "parameters.cfg"
        p.write_text("[intrinsics]\n# c\ndisp_min = -1.5\nDISP_MAX = 2\n")
        cfg = parse_flat_config(p)
        assert cfg["disp_min"] == "-1.5"
        assert cfg["disp_max"] == "2"

    def test_rejects_bare_line(self, tmp_path):
        p = tmp_path / "parameters.cfg"
        p.write_text("disp_min\n")
        with pytest.raises(LoadError):
            parse_flat_config(p)


class TestSceneRoundtrip:
    def test_written_scene_loads_identically(self, tmp_path):
        spec = _spec()
        out = write_scene(spec, tmp_path / "scene", seed=5)
        from lfdepth.synthetic import generate_synthetic

        lf_mem, gt_mem = generate_synthetic(spec, seed=5)
        loaded = load_scene(out)
        assert loaded.light_field.n == 3 and loaded.light_field.m == 3
        # 8-bit quantization happens at generation: round-trip is lossless
        assert np.array_equal(loaded.light_field.views, lf_mem.views)
        assert np.array_equal(loaded.gt.values, gt_mem.values)
        assert loaded.drange == DisparityRange(2, 2)

    def test_grid_dims_read_from_parameters(self, tmp_path):
        spec = _spec(n=4, m=2)
        out = write_scene(spec, tmp_path / "rect", seed=1)
        loaded = load_scene(out)
        assert (loaded.light_field.n, loaded.light_field.m) == (4, 2)

    def test_count_mismatch_rejected(self, tmp_path):
        out = write_scene(_spec(), tmp_path / "broken", seed=0)
        (out / "input_Cam008.png").unlink()
        with pytest.raises(LoadError, match="expected 9 images"):
            load_scene(out)

    def test_size_mismatch_rejected(self, tmp_path):
        from PIL import Image

        out = write_scene(_spec(), tmp_path / "odd", seed=0)
        Image.new("RGB", (10, 10)).save(out / "input_Cam004.png")
        with pytest.raises(LoadError, match="differs"):
            load_scene(out)

    def test_missing_parameters_rejected(self, tmp_path):
        out = write_scene(_spec(), tmp_path / "noparams", seed=0)
        (out / "parameters.cfg").unlink()
        with pytest.raises(LoadError, match="parameters"):
            load_scene(out)

    def test_nonsquare_without_dims_rejected(self, tmp_path):
        out = write_scene(_spec(n=4, m=2), tmp_path / "nodims", seed=0)
        params = (out / "parameters.cfg").read_text()
        (out / "parameters.cfg").write_text(
            "\n".join(
                line for line in params.splitlines()
                if not line.startswith(("n =", "m ="))
            )
        )
        with pytest.raises(LoadError, match="square"):
            load_scene(out)

    def test_3d_light_field_single_row(self, tmp_path):
        spec = _spec(n=5, m=1)
        out = write_scene(spec, tmp_path / "row", seed=2)
        loaded = load_scene(out)
        assert (loaded.light_field.n, loaded.light_field.m) == (5, 1)

    def test_7x7_grid_inferred_from_count(self, tmp_path):
        # square grids load without explicit dimensions in the parameters
        out = write_scene(_spec(n=7, m=7, size=16), tmp_path / "seven", seed=3)
        params = (out / "parameters.cfg").read_text()
        (out / "parameters.cfg").write_text(
            "\n".join(
                line for line in params.splitlines()
                if not line.startswith(("n =", "m ="))
            )
        )
        loaded = load_scene(out)
        assert (loaded.light_field.n, loaded.light_field.m) == (7, 7)
        assert loaded.light_field.width == 16
