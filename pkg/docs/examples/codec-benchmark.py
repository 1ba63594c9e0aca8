from lidarbox import decode_frame, encode_frame, gen_frames
from lidarbox.constants import RAW_BYTES_PER_PIXEL, SensorName

frames = gen_frames(seed=7, count=4, sensor=SensorName.TOP)
payloads = [encode_frame(frame.image, rotation=frame.rotation) for frame in frames]


def encode_all():
    for frame in frames:
        encode_frame(frame.image, rotation=frame.rotation)


def decode_all():
    for payload in payloads:
        decode_frame(payload)


if __name__ == "__main__":
    import json
    from timeit import timeit

    raw_bytes = sum(frame.image.valid.size for frame in frames) * RAW_BYTES_PER_PIXEL
    print("ratio", raw_bytes / sum(len(payload) for payload in payloads), sep=" : ")

    exec_details = {}
    for repeats in range(1, 6):
        details = {}
        for operation in [encode_all, decode_all]:
            exec_time = timeit(operation, number=repeats)
            details[operation.__name__] = {
                "seconds": exec_time,
                "mb_per_s": raw_bytes * repeats / 1e6 / exec_time,
            }
        exec_details[repeats] = details
        print(repeats, details, sep=" : ")

    with open("codec_benchmark.json", "w") as fh:
        json.dump(exec_details, fh, indent=4)
