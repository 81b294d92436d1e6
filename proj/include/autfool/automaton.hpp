#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "autfool/space.hpp"

namespace autfool {

// Deterministic automaton over states [0, num_states). Immutable after
// construction; next() must be pure.
class Automaton {
  public:
    Automaton(int num_states, int start_state)
        : num_states_(num_states), start_state_(start_state) {}
    virtual ~Automaton() = default;

    int num_states() const { return num_states_; }
    int start_state() const { return start_state_; }

    virtual int next(int state, const Symbol& sym) const = 0;

  protected:
    int num_states_;
    int start_state_;
};

// Transition given by a callable; the workhorse for tests and small models.
class FunctionAutomaton final : public Automaton {
  public:
    using Fn = std::function<int(int, const Symbol&)>;
    FunctionAutomaton(int num_states, int start_state, Fn fn)
        : Automaton(num_states, start_state), fn_(std::move(fn)) {}
    int next(int state, const Symbol& sym) const override { return fn_(state, sym); }

  private:
    Fn fn_;
};

// Transition tabulated per (step, symbol index, state); the on-disk
// automaton format deserializes into this.
class TableAutomaton final : public Automaton {
  public:
    // table[t][sym_index][state] -> state
    TableAutomaton(int num_states, int start_state,
                   std::vector<std::vector<std::vector<int>>> table)
        : Automaton(num_states, start_state), table_(std::move(table)) {}

    int next(int state, const Symbol& sym) const override {
        if (sym.step < static_cast<int>(table_.size()))
            return table_[sym.step][sym.index][state];
        return state;  // padding steps
    }

  private:
    std::vector<std::vector<std::vector<int>>> table_;
};

// Disjoint union of automata reading the same stream. Blocks never mix.
class ProductAutomaton final : public Automaton {
  public:
    explicit ProductAutomaton(std::vector<std::shared_ptr<const Automaton>> blocks);

    int next(int state, const Symbol& sym) const override;

    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const Automaton& block(int i) const { return *blocks_[i]; }
    // Global id of block i's state 0.
    int block_offset(int i) const { return offsets_[i]; }
    int block_of_state(int state) const;
    int block_start_state(int i) const {
        return offsets_[i] + blocks_[i]->start_state();
    }

  private:
    std::vector<std::shared_ptr<const Automaton>> blocks_;
    std::vector<int> offsets_;
};

// Validated single-step transition.
int step(const Automaton& f, int state, const Symbol& sym);

// Combines automata with per-block weights into one automaton whose weight
// vector is the concatenation. Returns (product, weights, offsets).
struct ProductBuild {
    std::shared_ptr<ProductAutomaton> automaton;
    std::vector<double> weights;
    std::vector<int> offsets;
};
ProductBuild product_automaton(
    const std::vector<std::pair<std::shared_ptr<const Automaton>,
                                std::vector<double>>>& parts);

}  // namespace autfool
