"""
This package compresses LiDAR range images losslessly (after quantization),
turns them back into point clouds and scores motion-forecasting predictions
with minADE, Miss Rate and mAP.

For instance:

```python
from lidarbox import decode_frame, encode_frame, gen_frames, project

frame = gen_frames(seed=7, count=1)[0]
payload = encode_frame(frame.image, rotation=frame.rotation)
decoded = decode_frame(payload)
cloud = project(decoded.to_range_image(frame.image.geometry))
print(len(payload), len(cloud))
```

## Forecasting metrics

```python
from lidarbox import evaluate, gen_synthetic, oracle_predictions

corpus = gen_synthetic(seed=7, n_scenarios=20, agents_per_scene=4)
report = evaluate(corpus, oracle_predictions(corpus))
print(report.average(8))
# MetricsSummary(min_ade=0.0, miss_rate=0.0, mean_average_precision=1.0)
```
"""

import logging
from importlib import metadata

try:
    __version__ = metadata.version("lidarbox")
except metadata.PackageNotFoundError:
    __version__ = "0.0.0"

__author__ = "Smartwa"
__repo__ = "https://github.com/Simatwa/lidarbox"

logger = logging.getLogger(__name__)

from lidarbox.codec import (  # noqa: E402
    DecodedFrame,
    decode_archive,
    decode_frame,
    encode_archive,
    encode_frame,
)
from lidarbox.config import CodecProfile, load_profile, load_thresholds  # noqa: E402
from lidarbox.constants import AgentType, Channel, PointFrame, ReturnIndex, SensorName, SplitTag  # noqa: E402
from lidarbox.metrics import (  # noqa: E402
    MatchThresholds,
    MetricsReport,
    evaluate,
    is_match,
    mean_average_precision,
    min_ade,
    miss_rate,
)
from lidarbox.pointcloud import PointCloud, project, to_world  # noqa: E402
from lidarbox.range_image import (  # noqa: E402
    QuantizationProfile,
    RangeImage,
    SensorGeometry,
    dequantize_channel,
    quantize_channel,
    validate_image,
)
from lidarbox.rawframe import RawFrame, read_raw_frame, write_raw_frame  # noqa: E402
from lidarbox.scenario import (  # noqa: E402
    AgentPrediction,
    AgentState,
    AgentTrack,
    Scenario,
    ScenarioPredictions,
    ScoredTrajectory,
    read_predictions,
    read_scenarios,
    write_predictions,
    write_scenarios,
)
from lidarbox.synthetic import (  # noqa: E402
    constant_velocity_predictions,
    gen_frames,
    gen_synthetic,
    oracle_predictions,
)

__all__ = [
    "RangeImage",
    "SensorGeometry",
    "QuantizationProfile",
    "CodecProfile",
    "quantize_channel",
    "dequantize_channel",
    "validate_image",
    "encode_frame",
    "decode_frame",
    "encode_archive",
    "decode_archive",
    "DecodedFrame",
    "PointCloud",
    "project",
    "to_world",
    "RawFrame",
    "read_raw_frame",
    "write_raw_frame",
    "AgentState",
    "AgentTrack",
    "Scenario",
    "ScoredTrajectory",
    "AgentPrediction",
    "ScenarioPredictions",
    "read_scenarios",
    "write_scenarios",
    "read_predictions",
    "write_predictions",
    "gen_synthetic",
    "gen_frames",
    "oracle_predictions",
    "constant_velocity_predictions",
    "MatchThresholds",
    "MetricsReport",
    "min_ade",
    "is_match",
    "miss_rate",
    "mean_average_precision",
    "evaluate",
    "load_profile",
    "load_thresholds",
    # Constants
    "SensorName",
    "ReturnIndex",
    "Channel",
    "PointFrame",
    "AgentType",
    "SplitTag",
]
