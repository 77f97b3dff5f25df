#include "evm/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "evm/constructions.hpp"
#include "evm/equivalence.hpp"
#include "evm/errors.hpp"
#include "evm/format.hpp"
#include "evm/ga.hpp"
#include "evm/runtime.hpp"
#include "evm/umachine.hpp"

namespace evm {

namespace {

/// Usage-class failure (exit 2) carrying a ready message.
struct UsageFailure {
    std::string message;
};

struct Field {
    std::string key;
    std::string value;
    bool quoted = false;
};

Field num(std::string key, std::size_t v) { return {std::move(key), std::to_string(v), false}; }
Field text(std::string key, std::string v) { return {std::move(key), std::move(v), true}; }
Field bare(std::string key, std::string v) { return {std::move(key), std::move(v), false}; }

class Emitter {
public:
    Emitter(std::ostream& os, TraceFormat f) : os_(os), format_(f) {}

    void record(const std::string& type, const std::vector<Field>& fields) {
        if (format_ == TraceFormat::text) {
            os_ << type;
            for (const auto& f : fields) {
                os_ << ' ' << f.key << '=';
                if (f.quoted) os_ << '"' << f.value << '"';
                else os_ << f.value;
            }
            os_ << '\n';
            return;
        }
        nlohmann::ordered_json j;
        j["type"] = type;
        for (const auto& f : fields) {
            if (f.quoted) j[f.key] = f.value;
            else j[f.key] = nlohmann::ordered_json::parse(is_number(f.value) ? f.value : "\"" + f.value + "\"");
        }
        os_ << j.dump() << '\n';
    }

private:
    static bool is_number(const std::string& s) {
        if (s.empty()) return false;
        std::size_t digits = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const char c = s[i];
            if (c >= '0' && c <= '9') ++digits;
            else if (!(c == '.' || (i == 0 && c == '-') || c == 'e' || c == '+')) return false;
        }
        return digits > 0;
    }

    std::ostream& os_;
    TraceFormat format_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageFailure{path + ": cannot open file"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Document load(const std::string& path) {
    const std::string content = read_file(path);
    try {
        return parse_document(content);
    } catch (const ParseError& e) {
        throw UsageFailure{path + ": " + e.what()};
    } catch (const Error& e) {
        throw UsageFailure{path + ": " + e.what()};
    }
}

template <typename F>
auto load_with(const std::string& path, F&& parse) {
    const std::string content = read_file(path);
    try {
        return parse(content);
    } catch (const ParseError& e) {
        throw UsageFailure{path + ": " + e.what()};
    } catch (const Error& e) {
        throw UsageFailure{path + ": " + e.what()};
    }
}

const EvolutionaryMachine& pick_machine(const Document& d, const std::string& name, const std::string& path) {
    if (!name.empty()) {
        if (const auto* m = d.find_machine(name)) return *m;
        throw DomainError(path + ": no machine named '" + name + "'");
    }
    if (d.machines.empty()) throw DomainError(path + ": file declares no machine");
    return d.machines.front();
}

TraceFormat parse_format(const std::string& f) { return f == "json-lines" ? TraceFormat::json_lines : TraceFormat::text; }

Mode mode_from(const std::string& text) {
    const Word parts = parse_word(text);
    if (parts.empty() || parts.size() > 2) throw UsageFailure{"--mode: expected '<mode>' or 'bounded <n>'"};
    std::size_t limit = 0;
    if (parts.size() == 2) {
        try {
            limit = std::stoull(parts[1]);
        } catch (const std::exception&) {
            throw UsageFailure{"--mode: bad limit '" + parts[1] + "'"};
        }
    }
    try {
        return parse_mode(parts[0], limit);
    } catch (const DomainError& e) {
        throw UsageFailure{std::string("--mode: ") + e.what()};
    }
}

void apply_budgets(Budgets& b, const std::vector<std::string>& items) {
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageFailure{"--budget: expected key=value, got '" + item + "'"};
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        std::size_t n = 0;
        try {
            std::size_t used = 0;
            n = std::stoull(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw UsageFailure{"--budget: bad value in '" + item + "'"};
        }
        if (key == "generations") b.max_generations = n;
        else if (key == "level-steps") b.max_steps_per_level = n;
        else if (key == "window") b.stability_window = n;
        else throw UsageFailure{"--budget: unknown key '" + key + "'"};
    }
}

/// Writes the document to -o (report on stdout) or everything to stdout, report as comments.
void deliver(const std::string& document, const std::string& construction, const std::vector<Field>& report,
             const std::string& output, TraceFormat format, std::ostream& out) {
    std::ostringstream rep;
    Emitter(rep, format).record("report", [&] {
        std::vector<Field> f{bare("construction", construction)};
        f.insert(f.end(), report.begin(), report.end());
        return f;
    }());
    if (!output.empty()) {
        std::ofstream file(output, std::ios::binary);
        if (!file) throw UsageFailure{output + ": cannot write file"};
        file << document;
        out << rep.str();
        return;
    }
    std::istringstream lines(rep.str());
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    out << document;
}

EvolutionaryMachine wrap_transducer(const FiniteTransducer& t, const EvolutionaryMachine& source) {
    EvolutionaryMachine m;
    m.name = t.name;
    m.flavor = Flavor::basic;
    m.schedule = ExplicitSchedule{{make_level(t)}};
    m.mode = Mode{};
    m.search = Never{};
    m.budgets = source.budgets;
    return m;
}

struct Options {
    std::string format = "text";
    std::string file, file2, machine, machine2, input, mode, output, kind = "functional", alphabet;
    std::vector<std::string> budgets;
    std::size_t horizon = 8, max_len = 5, generations = 6;
    bool exact = false;
    std::optional<std::size_t> expansion_bound;
    GaConfig ga;
    std::string threshold = "16";
    std::size_t max_generations = 10000;
    std::string net, table;
};

void add_ga_flags(CLI::App* app, Options& o) {
    app->add_option("--length", o.ga.length, "genome length L");
    app->add_option("--size", o.ga.size, "population size N");
    app->add_option("--mutation", o.ga.mutation, "per-bit mutation rate");
    app->add_option("--crossover", o.ga.crossover, "crossover rate");
    app->add_option("--tournament", o.ga.tournament, "tournament size");
    app->add_option("--elitism", o.ga.elitism, "elite count");
    app->add_option("--seed", o.ga.seed, "random seed");
    app->add_option("--generations", o.max_generations, "generation budget");
}

int cmd_run(const Options& o, std::ostream& out) {
    Document d = load(o.file);
    EvolutionaryMachine e = pick_machine(d, o.machine, o.file);
    if (!o.mode.empty()) e.mode = mode_from(o.mode);
    apply_budgets(e.budgets, o.budgets);
    e.validate();
    const Word input = parse_word(o.input);
    require_word_over(e.population_alphabet(), input, "input");
    const RunResult r = run_machine(e, Generation{input, 0});
    out << format_run(e, r, parse_format(o.format));
    return 0;
}

int cmd_flatten(const Options& o, std::ostream& out) {
    Document d = load(o.file);
    const EvolutionaryMachine& e = pick_machine(d, o.machine, o.file);
    const FiniteTransducer flat = flatten_bounded_efa(e);
    Document res;
    res.automata.emplace_back(flat);
    res.machines.push_back(wrap_transducer(flat, e));
    const auto& levels = std::get<ExplicitSchedule>(e.schedule).levels;
    deliver(emit_document(res), "flatten",
            {bare("source", e.name), num("levels", levels.size()), bare("result", flat.name),
             num("states", flat.states.size())},
            o.output, parse_format(o.format), out);
    return 0;
}

int cmd_collapse(const Options& o, std::ostream& out) {
    Document d = load(o.file);
    const EvolutionaryMachine& e = pick_machine(d, o.machine, o.file);
    const EvolutionaryMachine c = collapse_periodic(e);
    const auto& period = std::get<PeriodicSchedule>(e.schedule).levels;
    std::vector<Field> fields{bare("source", e.name), num("period", period.size()), bare("result", c.name),
                              num("generations", c.budgets.max_generations)};
    if (period.size() > 1 && !std::holds_alternative<Never>(e.search))
        fields.push_back(text("note", "search is checked only at multiples of the period; mid-period satisfaction is not preserved"));
    deliver(emit_document(document_of(c)), "collapse", fields, o.output, parse_format(o.format), out);
    return 0;
}

int cmd_gem2bem(const Options& o, std::ostream& out) {
    Document d = load(o.file);
    const EvolutionaryMachine& e = pick_machine(d, o.machine, o.file);
    const BemConversion c = gem_to_bem(e, o.horizon);
    std::string markers;
    for (const auto& m : c.markers) markers += (markers.empty() ? "" : " ") + m;
    deliver(emit_document(document_of(c.machine)), "gem2bem",
            {bare("source", e.name), num("horizon", o.horizon), bare("result", c.machine.name),
             text("markers", markers), text("encode", "population " + c.markers.front())},
            o.output, parse_format(o.format), out);
    return 0;
}

int cmd_to_ca(const Options& o, std::ostream& out) {
    Document d = load(o.file);
    const EvolutionaryMachine& e = pick_machine(d, o.machine, o.file);
    const EfaCellular c = periodic_efa_to_ca(e, o.expansion_bound);
    Document res;
    res.automata.emplace_back(c.sim.ca);
    const std::string b = std::to_string(c.expansion_bound);
    deliver(emit_document(res), "to-ca",
            {bare("source", e.name), bare("result", c.sim.ca.name()), num("period", c.period),
             num("expansion-bound", c.expansion_bound), num("cells", c.sim.ca.cells().size()),
             num("rules", c.sim.ca.rules().size()),
             text("steps-per-generation", "s*(2m+" + b + "+3)+4m+10 with m=(" + b + "+1)*s+4, s=support")},
            o.output, parse_format(o.format), out);
    if (!o.input.empty()) {
        std::ostringstream sim;
        Emitter em(sim, parse_format(o.format));
        const auto gens = c.generations(parse_word(o.input), o.generations);
        for (std::size_t i = 0; i < gens.size(); ++i)
            em.record("generation", {num("t", i + 1), text("gen", format_word(gens[i]))});
        std::istringstream lines(sim.str());
        for (std::string line; std::getline(lines, line);) out << (o.output.empty() ? "# " : "") << line << '\n';
    }
    return 0;
}

struct Loaded {
    Subject subject;
    std::optional<Automaton> automaton;
};

Loaded subject_from(const std::string& path, const std::string& name) {
    Document d = load(path);
    if (!name.empty()) {
        if (const auto* m = d.find_machine(name)) return {subject_of(*m), std::nullopt};
        if (const auto* a = d.find(name)) return {subject_of(*a), *a};
        throw DomainError(path + ": nothing named '" + name + "'");
    }
    if (!d.machines.empty()) return {subject_of(d.machines.front()), std::nullopt};
    if (!d.automata.empty()) return {subject_of(d.automata.front()), d.automata.front()};
    throw DomainError(path + ": file is empty");
}

FiniteTransducer as_acceptor(const std::optional<Automaton>& a, const std::string& path) {
    if (a) {
        if (const auto* t = std::get_if<FiniteTransducer>(&*a)) return *t;
        if (const auto* n = std::get_if<Nfa>(&*a)) return nfa_to_dfa(*n);
    }
    throw DomainError(path + ": --exact needs a dfa, transducer or nfa");
}

int cmd_equiv(const Options& o, std::ostream& out) {
    if (o.kind != "functional" && o.kind != "linguistic")
        throw UsageFailure{"--kind must be functional or linguistic"};
    const Loaded a = subject_from(o.file, o.machine);
    const Loaded b = subject_from(o.file2, o.machine2);
    EquivVerdict v;
    if (o.exact) {
        if (o.kind != "linguistic") throw DomainError("--exact compares languages; use --kind linguistic");
        v = dfa_language_equiv_exact(as_acceptor(a.automaton, o.file), as_acceptor(b.automaton, o.file2));
    } else {
        const Alphabet alphabet = o.alphabet.empty() ? a.subject.alphabet : Alphabet(parse_word(o.alphabet));
        v = o.kind == "functional" ? functional_equiv_bounded(a.subject, b.subject, alphabet, o.max_len)
                                   : linguistic_equiv_bounded(a.subject, b.subject, alphabet, o.max_len);
    }
    std::vector<Field> f{bare("kind", o.kind), bare("lhs-name", a.subject.name), bare("rhs-name", b.subject.name)};
    switch (v.status) {
        case EquivVerdict::Status::equivalent:
            f.push_back(bare("status", "equivalent"));
            f.push_back(bare("scope", v.exact ? "exact" : "bounded"));
            if (!v.exact) f.push_back(num("max-len", v.max_len));
            break;
        case EquivVerdict::Status::inequivalent:
            f.push_back(bare("status", "inequivalent"));
            f.push_back(text("witness", format_word(v.witness)));
            f.push_back(text("lhs", v.lhs));
            f.push_back(text("rhs", v.rhs));
            break;
        case EquivVerdict::Status::undecided:
            f.push_back(bare("status", "undecided"));
            f.push_back(text("reason", v.reason));
            break;
    }
    Emitter(out, parse_format(o.format)).record("verdict", f);
    return 0;
}

int cmd_demo_ga(Options o, std::ostream& out) {
    o.ga.threshold = Rational::parse(o.threshold);
    Budgets b;
    b.max_generations = o.max_generations;
    const GaRun run = run_ga_as_etm(o.ga, Mode{}, b);
    if (parse_format(o.format) == TraceFormat::text) {
        out << ga_csv(run.stats);
        return 0;
    }
    Emitter em(out, TraceFormat::json_lines);
    for (const auto& s : run.stats)
        em.record("generation", {num("t", s.t), bare("best", format_number(s.best.to_double())),
                                 bare("mean", format_number(s.mean))});
    em.record("summary", {bare("outcome", to_string(run.result.outcome)), num("t", run.result.result.index),
                          bare("best", format_number(run.best_fitness.to_double()))});
    return 0;
}

int cmd_demo_umachine(Options o, std::ostream& out) {
    const UMachineNetwork net = load_with(o.net, [](const std::string& s) { return parse_network(s); });
    const TruthTable table = load_with(o.table, [](const std::string& s) { return parse_truth_table(s); });
    Budgets b;
    b.max_generations = o.max_generations;
    const TrainResult r = btype_train(net, table, o.ga, b);
    std::string sw;
    for (bool on : r.switches) sw += std::string(sw.empty() ? "" : " ") + (on ? "on" : "off");
    Emitter em(out, parse_format(o.format));
    for (const auto& s : r.run.stats)
        em.record("generation", {num("t", s.t), bare("best", format_number(s.best.to_double())),
                                 bare("mean", format_number(s.mean))});
    em.record("result", {bare("outcome", to_string(r.run.result.outcome)), num("t", r.run.result.result.index),
                         bare("score", r.score.str()), text("switches", sw)});
    return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
    load(o.file);
    out << "ok\n";
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Evolutionary machine toolkit", "evm"};
    app.require_subcommand(1);
    Options o;
    auto fmt = [&](CLI::App* s) {
        s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json-lines"}));
    };

    auto* run = app.add_subcommand("run", "run an evolutionary machine");
    run->add_option("file", o.file)->required();
    run->add_option("--input", o.input, "initial generation (quoted word)")->required();
    run->add_option("--machine", o.machine, "machine name (default: first)");
    run->add_option("--mode", o.mode, "mode override, e.g. \"bounded 5\"");
    run->add_option("--budget", o.budgets, "generations=N, level-steps=N or window=N");
    fmt(run);

    std::vector<CLI::App*> constructions;
    for (const char* name : {"flatten", "collapse", "gem2bem", "to-ca"}) {
        auto* c = app.add_subcommand(name, std::string("construction: ") + name);
        c->add_option("file", o.file)->required();
        c->add_option("--machine", o.machine, "machine name (default: first)");
        c->add_option("-o,--output", o.output, "write the machine file here");
        fmt(c);
        constructions.push_back(c);
    }
    constructions[2]->add_option("--horizon", o.horizon, "cursor horizon")->check(CLI::PositiveNumber);
    constructions[3]->add_option("--input", o.input, "simulate this population");
    constructions[3]->add_option("--generations", o.generations, "generations to simulate");
    constructions[3]->add_option("--expansion-bound", o.expansion_bound, "max output symbols per input cell");

    auto* equiv = app.add_subcommand("equiv", "compare two machines");
    equiv->add_option("lhs", o.file)->required();
    equiv->add_option("rhs", o.file2)->required();
    equiv->add_option("--kind", o.kind)->check(CLI::IsMember({"functional", "linguistic"}));
    equiv->add_option("--max-len", o.max_len);
    equiv->add_flag("--exact", o.exact, "exact language comparison (finite automata)");
    equiv->add_option("--a", o.machine, "subject in the first file");
    equiv->add_option("--b", o.machine2, "subject in the second file");
    equiv->add_option("--alphabet", o.alphabet, "comparison alphabet (default: lhs input alphabet)");
    fmt(equiv);

    auto* ga = app.add_subcommand("demo-ga", "OneMax genetic algorithm as a machine level");
    add_ga_flags(ga, o);
    ga->add_option("--fitness", o.ga.fitness)->check(CLI::IsMember({"onemax"}));
    ga->add_option("--threshold", o.threshold, "target fitness");
    fmt(ga);

    auto* um = app.add_subcommand("demo-umachine", "train B-type switches with the genetic algorithm");
    um->add_option("net", o.net)->required();
    um->add_option("table", o.table)->required();
    add_ga_flags(um, o);
    fmt(um);

    auto* validate = app.add_subcommand("validate", "parse and check a machine file");
    validate->add_option("file", o.file)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run 'evm --help' for usage\n";
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(o, out);
        if (constructions[0]->parsed()) return cmd_flatten(o, out);
        if (constructions[1]->parsed()) return cmd_collapse(o, out);
        if (constructions[2]->parsed()) return cmd_gem2bem(o, out);
        if (constructions[3]->parsed()) return cmd_to_ca(o, out);
        if (equiv->parsed()) return cmd_equiv(o, out);
        if (ga->parsed()) return cmd_demo_ga(o, out);
        if (um->parsed()) return cmd_demo_umachine(o, out);
        return cmd_validate(o, out);
    } catch (const UsageFailure& f) {
        err << "error: " << f.message << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace evm
