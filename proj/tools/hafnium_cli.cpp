/*
 * Copyright 2026 The Hafnium Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hafnium/hafnium.hpp"

namespace {

using namespace hafnium;

int exit_code(ErrorCategory c) {
    switch (c) {
    case ErrorCategory::parse: return 2;
    case ErrorCategory::dimension: return 3;
    case ErrorCategory::numeric: return 4;
    case ErrorCategory::budget: return 5;
    case ErrorCategory::usage: return 1;
    }
    return 1;
}

// 12-digit mantissa with an unpadded exponent, e.g. 3.000000000000e0.
std::string format_sci(double x) {
    if (x == 0.0) return "0.0e0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    std::string s(buf);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    const int exponent = std::stoi(s.substr(e + 1));
    return s.substr(0, e + 1) + std::to_string(exponent);
}

std::string format_complex(cplx z) {
    const char sign = std::signbit(z.imag()) ? '-' : '+';
    return format_sci(z.real()) + " " + sign + " " + format_sci(std::abs(z.imag())) + " i";
}

struct EngineFlags {
    std::string backend = "spectral";
    std::string mode = "deterministic";
    unsigned threads = 1;

    void attach(CLI::App* app) {
        app->add_option("--backend", backend, "Power-trace backend")
            ->check(CLI::IsMember({"spectral", "charpoly"}));
        app->add_option("--mode", mode, "Reduction mode")->check(CLI::IsMember({"deterministic", "fast"}));
        app->add_option("--threads", threads, "Worker threads")->envname("HAFNIUM_THREADS")->check(CLI::PositiveNumber);
    }

    EngineOptions options() const {
        EngineOptions o;
        o.backend = parse_backend(backend);
        o.reduction = parse_reduction(mode);
        o.threads = threads;
        return o;
    }
};

/// Output sink: the named file, or stdout when the name is empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw Error(Errc::IoError, "cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<unsigned> parse_thread_list(const std::string& s) {
    std::vector<unsigned> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const int v = std::stoi(item);
        if (v <= 0) throw Error(Errc::OutOfRange, "thread counts must be positive");
        out.push_back(static_cast<unsigned>(v));
    }
    if (out.empty()) throw Error(Errc::OutOfRange, "empty thread list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact hafnians and loop hafnians of complex symmetric matrices"};
    app.require_subcommand(1);

    // compute
    auto* compute = app.add_subcommand("compute", "Hafnian of a matrix file");
    std::string compute_path;
    bool compute_loops = false;
    std::string compute_format = "auto";
    EngineFlags compute_engine;
    compute->add_option("path", compute_path, "Matrix file")->required();
    compute->add_flag("--loops", compute_loops, "Loop hafnian (diagonal entries weight self-loops)");
    compute->add_option("--format", compute_format, "Input format")
        ->check(CLI::IsMember({"auto", "text", "binary", "json"}));
    compute_engine.attach(compute);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a benchmark matrix");
    std::string gen_family = "complete", gen_format = "text", gen_out;
    std::size_t gen_n = 4;
    std::uint64_t gen_seed = 0;
    gen->add_option("--family", gen_family)->required();
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--seed", gen_seed);
    gen->add_option("--format", gen_format)->check(CLI::IsMember({"text", "binary", "json"}));
    gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "Timing/accuracy sweep over n, CSV output");
    std::string sw_family = "complete", sw_out;
    std::size_t sw_min = 8, sw_max = 16, sw_step = 2;
    unsigned sw_reps = 1;
    std::uint64_t sw_seed = 0;
    double sw_budget = 0.0;
    EngineFlags sw_engine;
    sw->add_option("--family", sw_family);
    sw->add_option("--n-min", sw_min);
    sw->add_option("--n-max", sw_max);
    sw->add_option("--step", sw_step);
    sw->add_option("--repetitions", sw_reps)->check(CLI::PositiveNumber);
    sw->add_option("--seed", sw_seed);
    sw->add_option("--budget-seconds", sw_budget, "Skip remaining points once this would be exceeded");
    sw->add_option("--out", sw_out);
    sw_engine.attach(sw);

    // fit
    auto* fit = app.add_subcommand("fit", "Fit t = a n^b 2^(c n) to a sweep CSV");
    std::string fit_path;
    double fit_threshold = 20.0;
    fit->add_option("path", fit_path, "Sweep CSV")->required();
    fit->add_option("--n-threshold", fit_threshold, "Only points with n above this are used");

    // threads
    auto* th = app.add_subcommand("threads", "Strong or weak thread-scaling experiment, CSV output");
    std::string th_family = "complete", th_list = "1,2,4,8", th_out;
    std::size_t th_n = 24;
    std::uint64_t th_seed = 0;
    bool th_weak = false;
    unsigned th_steps = 4;
    EngineFlags th_engine;
    th->add_option("--family", th_family);
    th->add_option("--n", th_n);
    th->add_option("--thread-list", th_list, "Comma separated thread counts (strong scaling)");
    th->add_flag("--weak", th_weak, "Weak scaling: step (n, threads) -> (n + 2, 2 threads)");
    th->add_option("--steps", th_steps, "Weak-scaling points");
    th->add_option("--seed", th_seed);
    th->add_option("--out", th_out);
    th_engine.attach(th);

    // oracle
    auto* orc = app.add_subcommand("oracle", "Brute-force reference values");
    std::string orc_kind = "hafnian", orc_path;
    long orc_n = -2;
    orc->add_option("--kind", orc_kind)
        ->check(CLI::IsMember({"hafnian", "loop_hafnian", "permanent", "matchings", "double_factorial", "telephone"}));
    orc->add_option("path", orc_path, "Matrix file (matrix kinds)");
    orc->add_option("--n", orc_n, "Argument for double_factorial / telephone");

    // lowrank
    auto* lr = app.add_subcommand("lowrank", "Hafnian of G G^T from a rectangular factor file");
    std::string lr_path;
    lr->add_option("path", lr_path, "Factor file with header \"rows cols\"")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compute) {
            std::ifstream in(compute_path, std::ios::binary);
            if (!in) throw Error(Errc::IoError, "cannot open '" + compute_path + "'");
            const MatrixFormat fmt = compute_format == "auto" ? detect_format(in) : parse_format(compute_format);
            const auto a = read_matrix(in, fmt);
            EngineOptions opts = compute_engine.options();
            opts.include_loops = compute_loops;
            const auto t0 = std::chrono::steady_clock::now();
            const cplx value = hafnian(a, opts);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << "result: " << format_complex(value) << '\n'
                      << "log10_abs: " << log10_magnitude(value) << '\n'
                      << "wall_seconds: " << secs << '\n'
                      << "backend: " << backend_name(opts.backend) << '\n'
                      << "mode: " << reduction_name(opts.reduction) << '\n'
                      << "threads: " << opts.threads << '\n'
                      << "terms: " << term_count(a.size()) << '\n';
        } else if (*gen) {
            const auto a = generate(parse_family(gen_family), gen_n, gen_seed);
            Output out(gen_out);
            write_matrix(out.stream(), a, parse_format(gen_format));
        } else if (*sw) {
            SweepConfig cfg;
            cfg.family = parse_family(sw_family);
            cfg.n_min = sw_min;
            cfg.n_max = sw_max;
            cfg.step = sw_step;
            cfg.engine = sw_engine.options();
            cfg.repetitions = sw_reps;
            cfg.seed = sw_seed;
            cfg.budget_seconds = sw_budget;
            Output out(sw_out);
            auto& os = out.stream();
            os << "# generator=" << random_generator_name << " seed=" << sw_seed << '\n' << csv_header << '\n';
            const auto result = sweep(cfg, [&](const BenchmarkRecord& r) { os << to_csv_row(r) << '\n' << std::flush; });
            for (const auto& [n, t] : median_wall_seconds(result.records))
                std::cerr << "n=" << n << " median_wall_seconds=" << t << '\n';
            if (result.budget_exceeded)
                throw Error(Errc::BudgetExceeded, "budget of " + std::to_string(sw_budget) +
                                                      " s reached; remaining points skipped");
        } else if (*fit) {
            std::ifstream in(fit_path);
            if (!in) throw Error(Errc::IoError, "cannot open '" + fit_path + "'");
            const auto f = fit_scaling(read_timing_csv(in), fit_threshold);
            std::cout << "a: " << f.a << '\n'
                      << "b: " << f.b << '\n'
                      << "c: " << f.c << '\n'
                      << "residual_log2: " << f.residual << '\n'
                      << "r_squared: " << f.r_squared << '\n'
                      << "points: " << f.points << '\n';
        } else if (*th) {
            const Family family = parse_family(th_family);
            Output out(th_out);
            auto& os = out.stream();
            os << csv_header << '\n';
            auto emit = [&](const BenchmarkRecord& r) { os << to_csv_row(r) << '\n' << std::flush; };
            const auto list = parse_thread_list(th_list);
            if (th_weak) weak_scaling(family, th_n, list.front(), th_steps, th_engine.options(), th_seed, emit);
            else thread_scaling(family, th_n, list, th_engine.options(), th_seed, emit);
        } else if (*orc) {
            if (orc_kind == "double_factorial" || orc_kind == "telephone") {
                if (orc_n < -1) throw Error(Errc::OutOfRange, "--n is required");
                std::cout << (orc_kind == "telephone" ? telephone(orc_n) : double_factorial(orc_n)) << '\n';
            } else {
                if (orc_path.empty()) throw Error(Errc::OutOfRange, "a matrix file is required");
                std::ifstream in(orc_path, std::ios::binary);
                if (!in) throw Error(Errc::IoError, "cannot open '" + orc_path + "'");
                const CMatrix raw = read_raw_matrix(in, detect_format(in));
                if (orc_kind == "permanent") {
                    std::cout << "result: " << format_complex(permanent_ryser(raw)) << '\n';
                } else if (orc_kind == "matchings") {
                    std::cout << matching_count_bruteforce(raw) << '\n';
                } else {
                    const auto a = validate_or_symmetrize(raw);
                    const cplx v = orc_kind == "hafnian" ? hafnian_bruteforce(a) : loop_hafnian_bruteforce(a);
                    std::cout << "result: " << format_complex(v) << '\n';
                }
            }
        } else if (*lr) {
            const CMatrix g = read_factor(lr_path);
            std::cout << "result: " << format_complex(hafnian_lowrank(g)) << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(category(e.code()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
