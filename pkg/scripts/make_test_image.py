#!/usr/bin/env python3
"""Write the bundled synthetic low-contrast scene to disk as PGM."""

import argparse

from evoenhance.image import save_image
from evoenhance.synth import low_contrast_scene


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=128)
    parser.add_argument("--seed", type=int, default=97)
    parser.add_argument("--out", default="scene.pgm")
    args = parser.parse_args()
    img = low_contrast_scene(args.size, args.seed)
    save_image(img, args.out)
    print(f"wrote {args.out} ({img.width}x{img.height}, levels "
          f"{img.pixels.min()}..{img.pixels.max()})")


if __name__ == "__main__":
    main()
