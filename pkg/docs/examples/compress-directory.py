from pathlib import Path
from tempfile import TemporaryDirectory

from lidarbox import write_raw_frame
from lidarbox.pipeline import compress_directory, decompress_archive, frame_filename
from lidarbox.synthetic import gen_frames


def main():
    with TemporaryDirectory() as tmp:
        frames_dir = Path(tmp) / "frames"
        frames_dir.mkdir()
        for index, frame in enumerate(gen_frames(seed=1, count=3)):
            write_raw_frame(frames_dir / frame_filename(index), frame.image, frame.rotation)

        archive, stats = compress_directory(frames_dir, workers=2)
        print("\n".join(stats.to_key_values()))

        written = decompress_archive(archive, Path(tmp) / "restored", points=True, point_format="csv")
        print(*written, sep="\n")


if __name__ == "__main__":
    main()
