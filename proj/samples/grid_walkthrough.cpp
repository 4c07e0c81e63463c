// Walks the value x time grid at a few delays and prints how the
// inconsistency degree splits into its value and time parts.

#include <cstdio>

#include "qdiscount/qdiscount.hpp"

using namespace qdiscount;

int main() {
    const ModelSpec base = ModelSpec::perceived(100.0, 0.3, 0.5, TimePerception::unified(0.5, 1.0, 0.2));
    std::printf("%-4s %8s %12s %12s %14s %14s %14s\n", "cell", "t", "V", "I", "dI/dt", "q H(I)", "(1-s) F(I)");
    for (Cell cell : kAllCells) {
        const ModelSpec spec = project_to_cell(base, cell);
        for (double t : {0.0, 5.0, 50.0}) {
            const DecompositionReport d = decompose_inconsistency(spec, t);
            std::printf("%-4s %8.1f %12.6f %12.6f %14.6e %14.6e %14.6e\n", cell_name(cell).c_str(), t,
                        value(spec, t), d.rate, inconsistency(spec, t), d.value_term, d.time_term);
        }
    }

    const ModelSpec hyp = ModelSpec::hyperbolic(10.0, 0.1);
    const double t_e = crossing_time({7.0, 5.0}, {10.0, 10.0}, hyp);
    std::printf("\n$7 at t=5 vs $10 at t=10 (hyperbolic, k=0.1): preference reverses at t=%.9f\n", t_e);
    return 0;
}
