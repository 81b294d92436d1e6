#include "autfool/automaton.hpp"

#include <algorithm>

namespace autfool {

ProductAutomaton::ProductAutomaton(std::vector<std::shared_ptr<const Automaton>> blocks)
    : Automaton(0, 0), blocks_(std::move(blocks)) {
    offsets_.reserve(blocks_.size());
    int total = 0;
    for (const auto& b : blocks_) {
        offsets_.push_back(total);
        total += b->num_states();
    }
    num_states_ = total;
    start_state_ = blocks_.empty() ? 0 : blocks_[0]->start_state();
}

int ProductAutomaton::block_of_state(int state) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), state);
    return static_cast<int>(it - offsets_.begin()) - 1;
}

int ProductAutomaton::next(int state, const Symbol& sym) const {
    int b = block_of_state(state);
    return offsets_[b] + blocks_[b]->next(state - offsets_[b], sym);
}

int step(const Automaton& f, int state, const Symbol& sym) {
    if (state < 0 || state >= f.num_states())
        throw ValidationError("state out of range");
    if (sym.step < 0) throw ValidationError("symbol step out of range");
    int out = f.next(state, sym);
    if (out < 0 || out >= f.num_states())
        throw ValidationError("automaton transition left the state space");
    return out;
}

ProductBuild product_automaton(
    const std::vector<std::pair<std::shared_ptr<const Automaton>,
                                std::vector<double>>>& parts) {
    if (parts.empty()) throw ValidationError("empty automaton list");
    std::vector<std::shared_ptr<const Automaton>> blocks;
    ProductBuild out;
    for (const auto& [aut, w] : parts) {
        if (static_cast<int>(w.size()) != aut->num_states())
            throw ValidationError("weight vector size mismatch in product");
        blocks.push_back(aut);
        out.offsets.push_back(static_cast<int>(out.weights.size()));
        out.weights.insert(out.weights.end(), w.begin(), w.end());
    }
    out.automaton = std::make_shared<ProductAutomaton>(std::move(blocks));
    return out;
}

}  // namespace autfool
