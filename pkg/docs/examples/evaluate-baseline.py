from lidarbox import constant_velocity_predictions, evaluate, gen_synthetic
from lidarbox.constants import HORIZON_SECONDS
from lidarbox.metrics import format_summary_table


def main():
    corpus = gen_synthetic(seed=7, n_scenarios=200, agents_per_scene=6)
    report = evaluate(corpus, constant_velocity_predictions(corpus))
    print(format_summary_table(report, label="cv"))
    for horizon in HORIZON_SECONDS:
        print(horizon, report.average(horizon), sep=" : ")


if __name__ == "__main__":
    main()
