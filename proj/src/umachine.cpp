#include "evm/umachine.hpp"

#include <charconv>

#include "evm/errors.hpp"

namespace evm {

namespace {

std::size_t number(std::size_t line, std::string_view text) {
    std::size_t v = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

GateSource source(std::size_t line, const std::string& tok) {
    if (tok.size() < 2 || (tok[0] != 'g' && tok[0] != 'i'))
        throw ParseError(line, "expected a source g<k> or i<k>, got '" + tok + "'");
    return GateSource{tok[0] == 'g' ? GateSource::Kind::gate : GateSource::Kind::input,
                      number(line, std::string_view(tok).substr(1))};
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line;
        Word toks;
        for (auto& t : parse_word(text.substr(pos, end - pos))) {
            if (t.front() == '#') break;
            toks.push_back(std::move(t));
        }
        pos = end + 1;
        if (!toks.empty()) f(line, toks);
    }
}

std::vector<bool> bits(std::size_t line, const Word& toks, std::size_t from, std::size_t to) {
    std::vector<bool> out;
    for (std::size_t i = from; i < to; ++i) {
        if (toks[i] != "0" && toks[i] != "1") throw ParseError(line, "expected a bit, got '" + toks[i] + "'");
        out.push_back(toks[i] == "1");
    }
    return out;
}

}  // namespace

void UMachineNetwork::validate() const {
    if (gates == 0) throw InvariantError("network", "no gates");
    if (wires.size() != gates) throw InvariantError("network", "every gate needs exactly one wire line");
    for (std::size_t g = 0; g < gates; ++g)
        for (const auto& s : wires[g]) {
            const bool ok = s.kind == GateSource::Kind::gate ? s.index < gates : s.index < inputs;
            if (!ok) throw InvariantError("g" + std::to_string(g), "source out of range");
        }
    if (switches && switches->size() != switch_count())
        throw InvariantError("network", "expected " + std::to_string(switch_count()) + " switches");
    if (outputs.empty()) throw InvariantError("network", "no output gates");
    for (auto o : outputs)
        if (o >= gates) throw InvariantError("g" + std::to_string(o), "output gate out of range");
}

UMachineNetwork parse_network(std::string_view text) {
    UMachineNetwork net;
    std::vector<bool> wired;
    for_each_line(text, [&](std::size_t line, const Word& t) {
        if (t[0] == "gates" && t.size() == 2) {
            net.gates = number(line, t[1]);
            net.wires.assign(net.gates, {});
            wired.assign(net.gates, false);
        } else if (t[0] == "inputs" && t.size() == 2) {
            net.inputs = number(line, t[1]);
        } else if (t[0] == "wire" && t.size() == 4) {
            const GateSource g = source(line, t[1]);
            if (g.kind != GateSource::Kind::gate || g.index >= net.gates)
                throw ParseError(line, "wire target must be a declared gate");
            if (wired[g.index]) throw ParseError(line, "gate " + t[1] + " is wired twice");
            wired[g.index] = true;
            net.wires[g.index] = {source(line, t[2]), source(line, t[3])};
        } else if (t[0] == "switches") {
            std::vector<bool> sw;
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (t[i] != "on" && t[i] != "off") throw ParseError(line, "expected on or off, got '" + t[i] + "'");
                sw.push_back(t[i] == "on");
            }
            net.switches = std::move(sw);
        } else if (t[0] == "outputs" && t.size() >= 2) {
            for (std::size_t i = 1; i < t.size(); ++i) {
                const GateSource g = source(line, t[i]);
                if (g.kind != GateSource::Kind::gate) throw ParseError(line, "outputs must be gates");
                net.outputs.push_back(g.index);
            }
        } else {
            throw ParseError(line, "unknown or malformed directive '" + t[0] + "'");
        }
    });
    for (std::size_t g = 0; g < wired.size(); ++g)
        if (!wired[g]) throw InvariantError("g" + std::to_string(g), "gate has no wire line");
    net.validate();
    return net;
}

std::vector<bool> atype_step(const UMachineNetwork& net, const std::vector<bool>& state, const std::vector<bool>& inputs,
                             const std::vector<bool>* switches) {
    if (state.size() != net.gates) throw DomainError("gate state has the wrong length");
    if (inputs.size() != net.inputs) throw DomainError("input vector has the wrong length");
    if (!switches && net.switches) switches = &*net.switches;
    if (switches && switches->size() != net.switch_count()) throw DomainError("switch vector has the wrong length");
    std::vector<bool> next(net.gates);
    for (std::size_t g = 0; g < net.gates; ++g) {
        bool in[2];
        for (std::size_t k = 0; k < 2; ++k) {
            const GateSource& s = net.wires[g][k];
            if (switches && !(*switches)[2 * g + k]) in[k] = true;
            else in[k] = s.kind == GateSource::Kind::gate ? state[s.index] : inputs[s.index];
        }
        next[g] = !(in[0] && in[1]);
    }
    return next;
}

TruthTable parse_truth_table(std::string_view text) {
    TruthTable table;
    bool first = true;
    for_each_line(text, [&](std::size_t line, const Word& t) {
        std::size_t arrow = 0;
        while (arrow < t.size() && t[arrow] != "->") ++arrow;
        if (t[0] != "row" || arrow == t.size()) throw ParseError(line, "expected 'row <bits> -> <bits>'");
        auto in = bits(line, t, 1, arrow);
        auto out = bits(line, t, arrow + 1, t.size());
        if (first) {
            table.inputs = in.size();
            table.outputs = out.size();
            first = false;
        } else if (in.size() != table.inputs || out.size() != table.outputs) {
            throw ParseError(line, "row arity differs from the first row");
        }
        table.rows.emplace_back(std::move(in), std::move(out));
    });
    if (table.rows.empty()) throw ParseError(1, "truth table has no rows");
    return table;
}

std::vector<bool> network_response(const UMachineNetwork& net, const std::vector<bool>& inputs,
                                   const std::vector<bool>& switches, std::size_t settle) {
    std::vector<bool> state(net.gates, false);
    for (std::size_t i = 0; i < settle; ++i) state = atype_step(net, state, inputs, &switches);
    std::vector<bool> out;
    for (auto o : net.outputs) out.push_back(state[o]);
    return out;
}

Rational switch_fitness(const UMachineNetwork& net, const TruthTable& table, const std::vector<bool>& switches,
                        std::optional<std::size_t> settle) {
    if (table.inputs != net.inputs || table.outputs != net.outputs.size())
        throw DomainError("truth table arity " + std::to_string(table.inputs) + "->" + std::to_string(table.outputs) +
                          " does not match the network (" + std::to_string(net.inputs) + " inputs, " +
                          std::to_string(net.outputs.size()) + " outputs)");
    const std::size_t steps = settle.value_or(2 * net.gates);
    long long matched = 0;
    for (const auto& [in, out] : table.rows)
        if (network_response(net, in, switches, steps) == out) ++matched;
    return Rational(matched, static_cast<long long>(table.rows.size()));
}

TrainResult btype_train(const UMachineNetwork& net, const TruthTable& table, GaConfig cfg, const Budgets& budgets) {
    switch_fitness(net, table, std::vector<bool>(net.switch_count(), true));  // arity check
    cfg.length = net.switch_count();
    cfg.fitness = "switch-match";
    cfg.threshold = Rational(1);
    FitnessFn f = [net, table](const Genome& g) { return switch_fitness(net, table, g); };
    TrainResult r;
    r.run = run_ga_as_etm(cfg, f, Mode{}, budgets);
    r.switches = r.run.best;
    r.score = r.run.best_fitness;
    return r;
}

}  // namespace evm
