// Simulated participant -> titration -> model ranking.

#include <cstdio>
#include <vector>

#include "qdiscount/qdiscount.hpp"

using namespace qdiscount;

int main() {
    const ModelSpec truth = ModelSpec::perceived(100.0, 1.2, 0.0, TimePerception::weber_fechner(1.0, 0.05));
    const std::vector<double> delays{1, 2, 5, 10, 30, 90, 180, 365, 730};

    ChoiceAgent agent{truth, 0.0, 7};
    TitrationConfig cfg = TitrationConfig::with_defaults(delays, truth.v0);
    cfg.min_step = 0.01;
    const auto traces = run_titration(cfg, agent);
    for (const auto& tr : traces)
        std::printf("delay %6.0f  V_d %8.3f  V_s %8.3f  indifference %8.3f  (%zu choices)\n", tr.delay, tr.v_d,
                    tr.v_s, tr.indifference, tr.choices.size());

    const IndifferenceDataset data = dataset_from_traces(traces, truth.v0);
    const ModelFamily families[] = {ModelFamily::Exponential, ModelFamily::Hyperbolic, ModelFamily::ExpWeberFechner,
                                    ModelFamily::ExpStevens};
    std::printf("\n%-12s %14s %12s\n", "family", "rss", "aic");
    for (const FitResult& r : compare_models(data, families))
        std::printf("%-12s %14.6e %12.4f\n", std::string(family_name(r.family)).c_str(), r.rss, r.aic);
    return 0;
}
