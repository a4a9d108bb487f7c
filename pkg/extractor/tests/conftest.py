import os

import numpy as np
import pytest
from PIL import Image

os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("HF_HUB_OFFLINE", "1")


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A seeded miniature CLIP-architecture checkpoint saved locally.

    Keeps the tests offline and fast; its image tower projects to 16 dims.
    """
    import torch
    from transformers import (
        CLIPImageProcessor,
        CLIPVisionConfig,
        CLIPVisionModelWithProjection,
    )

    torch.manual_seed(20230817)
    config = CLIPVisionConfig(
        hidden_size=32,
        intermediate_size=64,
        num_hidden_layers=2,
        num_attention_heads=2,
        image_size=32,
        patch_size=8,
        projection_dim=16,
    )
    model = CLIPVisionModelWithProjection(config)
    processor = CLIPImageProcessor(
        size={"shortest_edge": 32}, crop_size={"height": 32, "width": 32}
    )
    path = tmp_path_factory.mktemp("checkpoint") / "tiny-clip"
    model.save_pretrained(path)
    processor.save_pretrained(path)
    return str(path)


def synth_image(seed: int, size=(48, 40)) -> Image.Image:
    rng = np.random.default_rng(seed)
    base = rng.uniform(0, 255, size=(size[1], size[0], 3))
    ramp = np.linspace(0, 80, size[0])[None, :, None]
    return Image.fromarray(np.clip(base + ramp, 0, 255).astype("uint8"))


@pytest.fixture()
def image_dir(tmp_path):
    """Four readable images, two of which are byte-identical duplicates."""
    d = tmp_path / "images"
    d.mkdir()
    synth_image(1).save(d / "aurora.png")
    synth_image(2).save(d / "basalt.jpg")
    synth_image(3).save(d / "cinder.png")
    (d / "aurora_copy.png").write_bytes((d / "aurora.png").read_bytes())
    return d
