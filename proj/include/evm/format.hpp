#pragma once

// Line-oriented machine-definition documents.
//
//   automaton <dfa|nfa|transducer|tm|itm|ca|dispatch> <name>
//   ...directives...
//   machine <name>
//   ...directives...
//
// `#` starts a comment. Blocks may reference automata declared anywhere in the document.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evm/automata.hpp"
#include "evm/cellular.hpp"
#include "evm/machine.hpp"

namespace evm {

using Automaton = std::variant<FiniteTransducer, Nfa, TuringMachine, InductiveTuringMachine, CellularAutomaton1D, Dispatch>;

const std::string& automaton_name(const Automaton& a);
std::string automaton_kind(const Automaton& a);

struct Document {
    std::vector<Automaton> automata;
    std::vector<EvolutionaryMachine> machines;

    const Automaton* find(const std::string& name) const;
    const EvolutionaryMachine* find_machine(const std::string& name) const;
};

/// Throws ParseError (with line number) or InvariantError (naming the entity).
Document parse_document(std::string_view text);

/// First automaton of a document.
Automaton parse_automaton(std::string_view text);

std::string emit_automaton(const Automaton& a);
std::string emit_machine_block(const EvolutionaryMachine& e);
std::string emit_document(const Document& d);

/// Self-contained document for `e`: every automaton it references, then the machine.
Document document_of(const EvolutionaryMachine& e);

/// Level view of a parsed automaton (CA and NFA are not level automata).
LevelPtr as_level(const Automaton& a);

/// Structural equality, with dispatch targets compared by name.
bool same_automaton(const Automaton& a, const Automaton& b);

}  // namespace evm
