// Three steps of the arithmetized machine on a three-cell periodic tape,
// run by the array engine and by the big-integer engine side by side.

#include <iostream>

#include "ivtm/aca.hpp"
#include "ivtm/machine.hpp"

int main() {
    using namespace ivtm;
    const auto rule = expand_rule(arithmetize_spec(wolfram23_spec()), CorrectionMode::exact_bit3);
    const auto deltas = delta_table(rule);

    TapeState tape = init_tape({2, 2, 2}, 0).state;
    BigState big = tape_to_bigint(tape);
    std::cout << "t=0  N=" << big.n << "  head=" << tape.head << "\n";
    for (int t = 1; t <= 3; ++t) {
        const auto ev = advance(tape, rule, t);
        advance(big, deltas);
        std::cout << "t=" << t << "  wrote " << int(ev.new_value) << " at " << ev.index << "  N=" << big.n
                  << "  head=" << tape.head << (bigint_to_tape(big) == tape ? "" : "  MISMATCH") << "\n";
    }
}
