// Waiting times between committed updates under flat noise. With the default
// filter half-width the acceptance probability is 1/16, so the mean wait is 16.

#include <iostream>

#include "ivtm/aca.hpp"
#include "ivtm/stochastic.hpp"

int main() {
    using namespace ivtm;
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()), CorrectionMode::exact_bit3);
    std::mt19937_64 rng(7);
    const auto tape = init_tape(random_usable_cells(rng, 32), 0).state;

    auto src = NoiseSource::flat(42);
    const MatchFilter filter;
    const auto run = run_stochastic(tape, rule, src, filter, 200000);
    const auto hist = waiting_histogram(run.waiting_times, 12, true);

    std::cout << "commits " << run.commits.size() << "  mean wait " << hist.mean << "  variance " << hist.variance << "\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        std::cout << "[" << hist.edges[i] << ", " << hist.edges[i + 1] << ")  " << hist.counts[i] << "\n";
}
