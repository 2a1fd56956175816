// Copyright 2026 The qhvm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qhvm/cli.h"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "qhvm/cnc.h"
#include "qhvm/hvm.h"
#include "qhvm/oracle.h"
#include "qhvm/polytope.h"
#include "qhvm/qcm.h"
#include "qhvm/section.h"
#include "qhvm/simulator.h"
#include "qhvm/symmetry.h"

namespace qhvm {

namespace {

// Bad input detected after parsing; exits with kExitUsage.
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::Format, "cannot write " + path);
    }
    out << text;
}

nlohmann::json read_json(const std::string &path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorKind::Format, path + ": " + e.what());
    }
}

std::string file_hash(const std::string &path) {
    return hex64(fnv1a64(read_file(path)));
}

class Manifest {
   public:
    Manifest(std::string command, const std::vector<std::string> &args) {
        j_["tool"] = "qhvm";
        j_["version"] = kToolVersion;
        j_["convention"] = kPhaseConventionId;
        j_["command"] = std::move(command);
        j_["args"] = args;
        j_["parameters"] = nlohmann::json::object();
        j_["seeds"] = nlohmann::json::object();
        j_["inputs"] = nlohmann::json::array();
        j_["outputs"] = nlohmann::json::array();
    }

    template <typename T>
    void param(const std::string &key, const T &value) {
        j_["parameters"][key] = value;
    }
    void seed(const std::string &key, std::uint64_t value) {
        j_["seeds"][key] = value;
    }
    void input(const std::string &path) {
        j_["inputs"].push_back({{"path", path}, {"fnv1a64", file_hash(path)}});
    }
    void output(const std::string &path) {
        j_["outputs"].push_back({{"path", path}, {"fnv1a64", file_hash(path)}});
    }
    void write(const std::string &path, int exit_code) {
        j_["exit_code"] = exit_code;
        write_file(path, j_.dump(2) + "\n");
    }

   private:
    nlohmann::json j_;
};

struct LoadedState {
    std::size_t n = 0;
    std::optional<ExactOp> exact;
    RealOp real{1};
};

// Operator record {n, convention, terms}, {"ket": [[re, im], ...]} or
// {"stabilizer": {"generators": [...], "signs": [...]}}.
LoadedState load_state(const nlohmann::json &j) {
    LoadedState s;
    if (j.contains("terms")) {
        s.exact = op_from_json(j);
    } else if (j.contains("stabilizer")) {
        std::vector<PauliIndex> gens;
        for (const auto &g : j.at("stabilizer").at("generators")) {
            gens.push_back(PauliIndex::from_string(g.get<std::string>()));
        }
        auto signs = j.at("stabilizer").at("signs").get<std::vector<int>>();
        if (gens.empty()) {
            throw UsageError("stabilizer state needs generators");
        }
        s.exact = StabilizerState::from_generators(gens[0].n, gens, signs).projector();
    } else if (j.contains("ket")) {
        s.real = from_dense(ket_to_density(ket_from_json(j.at("ket"))));
    } else {
        throw UsageError("state file needs \"terms\", \"ket\" or \"stabilizer\"");
    }
    if (s.exact) {
        if (s.exact->trace() != Rational(1)) {
            throw UsageError("state operator must have trace 1");
        }
        s.real = to_real(*s.exact);
    } else if (std::abs(s.real.trace() - 1.0) > 1e-9) {
        throw UsageError("state operator must have trace 1");
    }
    s.n = s.real.num_qubits();
    return s;
}

std::shared_ptr<const VertexDictionary> dictionary_for(const std::string &path, std::size_t n, Manifest &m) {
    if (!path.empty()) {
        m.input(path);
        auto d = std::make_shared<const VertexDictionary>(load_vertices(path));
        if (d->n != n) {
            throw UsageError("dictionary is for " + std::to_string(d->n) + " qubits, input has " + std::to_string(n));
        }
        return d;
    }
    m.param("dictionary", n == 1 ? "enumerated" : "cnc");
    if (n == 1) {
        return std::make_shared<const VertexDictionary>(enumerate_vertices(build_halfspaces(1)));
    }
    return std::make_shared<const VertexDictionary>(cnc_dictionary(n));
}

std::string fmt(double v, int digits = 12) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string distribution_csv(const Distribution &d, const std::map<std::string, Rational> *exact) {
    std::ostringstream os;
    os << "outcome,probability" << (exact ? ",exact" : "") << "\n";
    char buf[64];
    for (const auto &[k, v] : d) {
        std::snprintf(buf, sizeof buf, "%.15f", v);
        os << k << ',' << buf;
        if (exact) {
            os << ',' << exact->at(k).get_str();
        }
        os << '\n';
    }
    return os.str();
}

double max_deviation(const Distribution &a, const Distribution &b) {
    double worst = 0;
    for (const auto &[k, v] : a) {
        auto it = b.find(k);
        worst = std::max(worst, std::abs(v - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto &[k, v] : b) {
        if (!a.count(k)) {
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

void emit(const std::string &out_path, const std::string &text, std::ostream &out, Manifest &m) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    write_file(out_path, text);
    m.output(out_path);
}

int finish(Manifest &m, const std::string &out_path, int code) {
    if (!out_path.empty()) {
        m.write(out_path + ".manifest.json", code);
    }
    return code;
}

struct Options {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    double tol = 1e-9;
    // build
    std::size_t build_n = 1;
    bool enumerate = false;
    bool cnc = false;
    double max_seconds = 600;
    std::string catalog;
    // shared
    std::string input;
    std::string dict;
    std::string out;
    // simulate
    std::string seq;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    bool exact = false;
    bool verify = false;
    double tv_tol = 0.01;
    std::string kernels;
    std::string program;
    // section
    std::size_t res = 100;
    double range = 0.3;
    std::string points;
    // check
    bool sw = false;
    bool covariance = false;
    bool bounded = false;
    bool vertices = false;
    std::size_t cnc_n = 0;
    std::size_t bounded_n = 2;
    std::size_t samples = 0;
};

int cmd_build(const Options &o, const std::vector<std::string> &args, std::ostream &out) {
    Manifest m("build", args);
    m.param("n", o.build_n);
    m.param("mode", o.enumerate ? "enumerate" : "cnc");
    VertexDictionary dict;
    int code = kExitOk;
    if (o.enumerate) {
        EnumerationBudget budget;
        budget.max_seconds = o.max_seconds;
        m.param("max_seconds", o.max_seconds);
        try {
            dict = enumerate_vertices(build_halfspaces(o.build_n), budget);
        } catch (const PartialEnumeration &e) {
            std::string partial = o.out + ".partial.json";
            save_vertices(e.partial(), partial);
            m.output(partial);
            out << "enumeration stopped after " << e.rows_inserted()
                << " halfspaces; intermediate polytope written to " << partial << "\n";
            return finish(m, o.out, kExitPartial);
        }
    } else {
        dict = cnc_dictionary(o.build_n);
        if (!o.catalog.empty()) {
            write_file(o.catalog, cnc_catalog_json(find_maximal_cnc(o.build_n)).dump(2) + "\n");
            m.output(o.catalog);
        }
    }
    save_vertices(dict, o.out);
    m.output(o.out);
    if (!o.kernels.empty()) {
        auto shared = std::make_shared<const VertexDictionary>(dict);
        KernelCache cache(shared);
        std::atomic<std::size_t> infeasible{0};
        std::vector<std::exception_ptr> errors(o.threads);
        auto work = [&](std::size_t w) {
            try {
                for (std::size_t alpha = w; alpha < dict.size(); alpha += o.threads) {
                    for (std::uint64_t key = 1; key < (std::uint64_t{1} << (2 * dict.n)); ++key) {
                        try {
                            cache.get(alpha, PauliIndex::from_packed(dict.n, key));
                        } catch (const Error &e) {
                            if (e.kind() != ErrorKind::Infeasible) {
                                throw;
                            }
                            ++infeasible;
                        }
                    }
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < o.threads; ++w) {
            pool.emplace_back(work, w);
        }
        work(0);
        for (auto &t : pool) {
            t.join();
        }
        for (const auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
        cache.save(o.kernels);
        m.output(o.kernels);
        out << "kernels=" << cache.size() << " infeasible=" << infeasible << "\n";
    }
    out << "n=" << dict.n << " vertices=" << dict.size() << " complete=" << (dict.complete ? "true" : "false")
        << " hash=" << dict.hash_hex() << "\n";
    return finish(m, o.out, code);
}

int cmd_decompose(const Options &o, const std::vector<std::string> &args, std::ostream &out) {
    Manifest m("decompose", args);
    m.input(o.input);
    LoadedState s = load_state(read_json(o.input));
    auto dict = dictionary_for(o.dict, s.n, m);
    m.param("tol", o.tol);
    ProbVector p;
    try {
        p = s.exact ? decompose_state(*s.exact, *dict) : decompose_state(s.real, *dict);
    } catch (const InfeasibleDecomposition &e) {
        std::string cert = o.out + ".certificate.json";
        write_file(cert, nlohmann::json{{"convention", kPhaseConventionId},
                                        {"dictionary_hash", dict->hash_hex()},
                                        {"certificate", e.certificate()}}
                             .dump(2) +
                             "\n");
        m.output(cert);
        out << "infeasible: " << e.what() << "; certificate written to " << cert << "\n";
        return finish(m, o.out, kExitInfeasible);
    }
    write_file(o.out, prob_vector_to_json(p).dump(2) + "\n");
    m.output(o.out);
    out << "support=" << p.support().size() << " residual=" << fmt(p.residual) << " exact=" << (p.exact ? "true" : "false")
        << "\n";
    return finish(m, o.out, p.residual <= o.tol ? kExitOk : kExitVerification);
}

int cmd_simulate(const Options &o, const std::vector<std::string> &args, std::ostream &out) {
    Manifest m("simulate", args);
    m.input(o.input);
    m.param("sequence", o.seq);
    m.param("exact", o.exact);
    m.param("tol", o.tol);
    if (!o.exact) {
        m.param("trials", o.trials);
        m.seed("master", o.seed);
    }
    nlohmann::json j = read_json(o.input);
    std::string text;
    std::optional<double> deviation;
    double last_zero = 0;
    double threshold = o.exact ? o.tol : o.tv_tol;

    auto with_cache = [&](std::shared_ptr<const VertexDictionary> dict, auto &&body) {
        KernelCache cache(dict);
        if (!o.kernels.empty() && std::ifstream(o.kernels)) {
            cache.load(o.kernels);
        }
        body(cache);
        if (!o.kernels.empty()) {
            cache.save(o.kernels);
        }
    };

    if (j.contains("ops")) {
        QcmCircuit c = circuit_from_json(j);
        if (!o.seq.empty()) {
            std::stringstream ss(o.seq);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item.size() == c.magic && c.magic < c.n) {
                    item += std::string(c.n - c.magic, 'I');
                }
                c.ops.push_back(MeasureOp{PauliIndex::from_string(item), 0});
            }
        }
        c.validate();
        if (c.magic == 0) {
            throw UsageError("circuit has no magic qubits");
        }
        MeasurementProgram prog = compile(c);
        if (!o.program.empty()) {
            write_file(o.program, program_to_json(prog).dump(2) + "\n");
            m.output(o.program);
        }
        auto dict = dictionary_for(o.dict, c.magic, m);
        ProbVector p = decompose_state(magic_state(c.magic).op, *dict);
        with_cache(dict, [&](KernelCache &cache) {
            Distribution got;
            if (o.exact) {
                got = evaluate_program_exact(prog, p, cache);
                text = distribution_csv(got, nullptr);
            } else {
                auto report = sample_program(prog, p, o.trials, o.seed, cache, o.threads);
                got = report.empirical();
                text = report.to_csv();
            }
            last_zero = last_outcome_zero(got);
            if (o.verify) {
                Distribution qm = simulate_circuit_oracle(c);
                deviation = o.exact ? max_deviation(got, qm) : total_variation(got, qm);
            }
        });
    } else {
        LoadedState s = load_state(j);
        if (o.seq.empty()) {
            throw UsageError("simulate: --seq is required for a state input");
        }
        MeasurementSequence seq = parse_sequence(s.n, o.seq);
        auto dict = dictionary_for(o.dict, s.n, m);
        ProbVector p = s.exact ? decompose_state(*s.exact, *dict) : decompose_state(s.real, *dict);
        with_cache(dict, [&](KernelCache &cache) {
            Distribution got;
            if (o.exact) {
                if (p.exact) {
                    auto exact = exact_joint_distribution_rational(p, seq, cache);
                    for (const auto &[k, v] : exact) {
                        got[k] = v.get_d();
                    }
                    text = distribution_csv(got, &exact);
                } else {
                    got = exact_joint_distribution(p, seq, cache);
                    text = distribution_csv(got, nullptr);
                }
            } else {
                auto report = sample_statistics(p, seq, o.trials, o.seed, cache, o.threads);
                got = report.empirical();
                text = report.to_csv();
            }
            last_zero = last_outcome_zero(got);
            if (o.verify) {
                Distribution qm = joint_distribution(to_dense(s.real), seq);
                deviation = o.exact ? max_deviation(got, qm) : total_variation(got, qm);
            }
        });
    }
    emit(o.out, text, out, m);
    if (!o.out.empty() || o.verify) {
        out << "P(last outcome = 0) = " << fmt(last_zero, 6) << "\n";
    }
    int code = kExitOk;
    if (deviation) {
        bool ok = *deviation <= threshold;
        m.param("verify_deviation", *deviation);
        out << "verify: " << (o.exact ? "max |p_hvm - p_qm|" : "total variation") << " = " << fmt(*deviation, 6)
            << " (tolerance " << fmt(threshold, 6) << ") " << (ok ? "PASS" : "FAIL") << "\n";
        code = ok ? kExitOk : kExitVerification;
    }
    return finish(m, o.out, code);
}

int cmd_section(const Options &o, const std::vector<std::string> &args, std::ostream &out) {
    Manifest m("section", args);
    SectionSpec spec;
    spec.resolution = o.res;
    spec.x_min = spec.y_min = -o.range;
    spec.x_max = spec.y_max = o.range;
    spec.threads = o.threads;
    m.param("resolution", o.res);
    m.param("range", o.range);
    SectionClassifier classifier(o.tol);
    SectionGrid grid = scan(spec, classifier);
    write_file(o.out, grid.to_csv());
    m.output(o.out);
    auto points = labeled_points(classifier);
    std::string points_path = o.points.empty() ? o.out + ".points.json" : o.points;
    write_file(points_path, labeled_points_json(points).dump(2) + "\n");
    m.output(points_path);
    out << "points=" << grid.labels.size();
    for (auto l : {SectionLabel::StabilizerMix, SectionLabel::PhysicalOnly, SectionLabel::LambdaOnly,
                   SectionLabel::Outside}) {
        out << " " << label_name(l) << "=" << grid.count(l);
    }
    out << " nesting_violations=" << grid.nesting_violations << "\n";
    for (const auto &p : points) {
        out << p.name << " (" << fmt(p.x, 6) << ", " << fmt(p.y, 6) << "): " << label_name(p.at.label);
        for (const auto &pr : p.probes) {
            out << " | " << pr.direction << ": " << label_name(pr.inner) << " -> " << label_name(pr.outer);
        }
        out << (p.on_boundary() ? " [boundary]" : "") << "\n";
    }
    return finish(m, o.out, grid.nesting_violations == 0 ? kExitOk : kExitVerification);
}

int cmd_check(const Options &o, const std::vector<std::string> &args, std::ostream &out) {
    if (!(o.sw || o.covariance || o.bounded || o.vertices)) {
        throw UsageError("check: choose at least one of --sw, --covariance, --bounded, --vertices");
    }
    Manifest m("check", args);
    m.param("tol", o.tol);
    m.seed("samples", o.seed);
    std::vector<CriterionResult> rows;
    auto cube = std::make_shared<const VertexDictionary>(enumerate_vertices(build_halfspaces(1)));

    if (o.sw) {
        KernelCache cache(cube);
        auto report = sw_checks(*cube, cache, o.seed, 50, o.tol);
        rows.insert(rows.end(), report.criteria.begin(), report.criteria.end());
    }
    if (o.covariance) {
        auto group = enumerate_clifford(1);
        RealOp t = magic_state(1).op;
        double residual = 0;
        bool ok = true;
        for (const auto &g : group) {
            auto pi = vertex_orbit(g, *cube);
            for (std::size_t a = 0; a < cube->size(); ++a) {
                ok = ok && g.act(cube->vertices[a]) == cube->vertices[pi(a)];
            }
            auto c = check_covariance(pi, t, *cube, o.tol);
            residual = std::max(residual, c.residual);
            ok = ok && c.ok;
        }
        rows.push_back({"covariance", ok ? "PASS" : "FAIL", residual,
                        std::to_string(group.size()) + " Cliffords x " + std::to_string(cube->size()) + " vertices"});
    }
    if (o.bounded) {
        for (std::size_t n = 1; n <= o.bounded_n; ++n) {
            auto report = boundedness_check(HalfspaceSystem(n));
            rows.push_back({"bounded n=" + std::to_string(n), report.bounded ? "PASS" : "FAIL", 0,
                            std::to_string(report.certificates.size()) + " hypercube certificates"});
        }
        bool inside = within_hypercube(*cube);
        rows.push_back({"hypercube n=1 vertices", inside ? "PASS" : "FAIL", 0, "every vertex has |Tr(T_a A)| <= 1"});
        if (o.bounded_n >= 2) {
            auto cnc = cnc_dictionary(2);
            bool ok = within_hypercube(cnc);
            rows.push_back({"hypercube n=2 cnc", ok ? "PASS" : "FAIL", 0,
                            std::to_string(cnc.size()) + " cnc operators"});
        }
    }
    if (o.vertices) {
        std::size_t n = o.cnc_n == 0 ? 1 : o.cnc_n;
        VertexDictionary dict = o.cnc_n == 0 ? *cube : cnc_dictionary(n);
        HalfspaceSystem system = build_halfspaces(n);
        std::vector<std::size_t> ids(dict.size());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            ids[k] = k;
        }
        if (o.samples > 0 && o.samples < ids.size()) {
            CounterRng rng(o.seed, 0);
            for (std::size_t k = 0; k < o.samples; ++k) {
                std::swap(ids[k], ids[k + rng.next() % (ids.size() - k)]);
            }
            ids.resize(o.samples);
        }
        std::size_t certified = 0;
        for (auto id : ids) {
            certified += certify_vertex(dict.vertices[id], system);
        }
        rows.push_back({std::string("vertices ") + (o.cnc_n == 0 ? "enumerated n=1" : "cnc n=" + std::to_string(n)),
                        certified == ids.size() ? "PASS" : "FAIL", 0,
                        std::to_string(certified) + "/" + std::to_string(ids.size()) + " certified"});
    }

    bool ok = true;
    nlohmann::json report = nlohmann::json::array();
    for (const auto &r : rows) {
        out << std::left << std::setw(24) << r.name << std::setw(18) << r.status << std::setw(12) << fmt(r.residual, 3)
            << r.detail << "\n";
        ok = ok && (r.status == "PASS" || r.status == "FAILED-BY-DESIGN");
        report.push_back({{"name", r.name}, {"status", r.status}, {"residual", r.residual}, {"detail", r.detail}});
    }
    if (!o.out.empty()) {
        write_file(o.out, nlohmann::json{{"convention", kPhaseConventionId}, {"passed", ok}, {"criteria", report}}.dump(2) +
                              "\n");
        m.output(o.out);
    }
    return finish(m, o.out, ok ? kExitOk : kExitVerification);
}

int cmd_replay(const std::string &path, std::ostream &out, std::ostream &err) {
    nlohmann::json j = read_json(path);
    auto args = j.at("args").get<std::vector<std::string>>();
    if (!args.empty() && args[0] == "replay") {
        throw UsageError("replay: manifest records another replay");
    }
    int code = run_cli(args, out, err);
    bool same = code == j.value("exit_code", 0);
    for (const auto &rec : j.at("outputs")) {
        std::string p = rec.at("path");
        std::string now = file_hash(p);
        bool match = now == rec.at("fnv1a64").get<std::string>();
        out << "replay " << p << ": " << (match ? "identical" : "differs") << "\n";
        same = same && match;
    }
    return same ? kExitOk : kExitVerification;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Infeasible:
            return kExitInfeasible;
        case ErrorKind::Capacity:
        case ErrorKind::Budget:
            return kExitCapacity;
        case ErrorKind::Internal:
            return kExitError;
        default:
            return kExitUsage;
    }
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qhvm: hidden variable model for qubit Pauli measurements"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--tol", o.tol, "numerical tolerance")->check(CLI::PositiveNumber);

    auto *build = app.add_subcommand("build", "build a vertex dictionary");
    build->add_option("n", o.build_n, "number of qubits")->required()->check(CLI::Range(1, 4));
    auto *en = build->add_flag("--enumerate", o.enumerate, "vertex enumeration");
    auto *cn = build->add_flag("--cnc", o.cnc, "cnc phase point operators");
    en->excludes(cn);
    build->add_option("--out", o.out, "dictionary file")->required();
    build->add_option("--max-seconds", o.max_seconds, "enumeration time budget");
    build->add_option("--catalog", o.catalog, "also write the cnc set catalog (with --cnc)");
    build->add_option("--kernels", o.kernels, "also solve and write every transition kernel");

    auto *decompose = app.add_subcommand("decompose", "write the probability vector of a state");
    decompose->add_option("state", o.input, "state file")->required();
    decompose->add_option("--dict", o.dict, "vertex dictionary file");
    decompose->add_option("--out", o.out, "probability vector file")->required();

    auto *simulate = app.add_subcommand("simulate", "sample or evaluate Pauli measurement sequences");
    simulate->add_option("input", o.input, "state or circuit file")->required();
    simulate->add_option("--seq", o.seq, "comma separated Pauli strings");
    simulate->add_option("-N,--trials", o.trials, "number of trajectories")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", o.seed, "master seed");
    simulate->add_flag("--exact", o.exact, "exact outcome distribution instead of sampling");
    simulate->add_flag("--verify", o.verify, "compare with the density matrix simulation");
    simulate->add_option("--tv-tol", o.tv_tol, "total variation bound for sampled --verify");
    simulate->add_option("--dict", o.dict, "vertex dictionary file");
    simulate->add_option("--out", o.out, "report file");
    simulate->add_option("--kernels", o.kernels, "kernel cache file (read and updated)");
    simulate->add_option("--program", o.program, "write the compiled measurement program");

    auto *section = app.add_subcommand("section", "scan the two-qubit cross section");
    section->add_option("--res", o.res, "grid points per axis");
    section->add_option("--range", o.range, "half width of the square")->check(CLI::PositiveNumber);
    section->add_option("--out", o.out, "CSV file")->required();
    section->add_option("--points", o.points, "labeled point report");

    auto *check = app.add_subcommand("check", "run verification suites");
    check->add_flag("--sw", o.sw, "phase space criteria on the single-qubit cube");
    check->add_flag("--covariance", o.covariance, "Clifford covariance on the single-qubit cube");
    check->add_flag("--bounded", o.bounded, "hypercube bound");
    check->add_option("--bounded-n", o.bounded_n, "largest n for --bounded")->check(CLI::Range(1, 3));
    check->add_flag("--vertices", o.vertices, "certify vertices");
    check->add_option("--cnc", o.cnc_n, "use cnc operators on n qubits for --vertices")->check(CLI::Range(1, 2));
    check->add_option("--samples", o.samples, "sample this many operators (0 = all)");
    check->add_option("--seed", o.seed, "sampling seed");
    check->add_option("--out", o.out, "JSON report");

    std::string manifest;
    auto *replay = app.add_subcommand("replay", "rerun a manifest and compare outputs");
    replay->add_option("manifest", manifest, "manifest file")->required();

    std::vector<std::string> argv_store{"qhvm"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (build->parsed() && !o.enumerate && !o.cnc) {
            throw CLI::ValidationError("build", "one of --enumerate or --cnc is required");
        }
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (build->parsed()) {
            return cmd_build(o, args, out);
        }
        if (decompose->parsed()) {
            return cmd_decompose(o, args, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(o, args, out);
        }
        if (section->parsed()) {
            return cmd_section(o, args, out);
        }
        if (check->parsed()) {
            return cmd_check(o, args, out);
        }
        return cmd_replay(manifest, out, err);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const nlohmann::json::exception &e) {
        err << "error: malformed input: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace qhvm
