/*
 * Copyright 2026 The usid authors
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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "usid/usid.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

/// Minimal ordered JSON composer; all keys here are plain ASCII and numbers are
/// printed with 17 significant digits, which nlohmann's shortest-round-trip
/// dump would not give us.
class JsonObject {
public:
    template <typename T>
    JsonObject& field(const std::string& key, const T& value) {
        raw(key, fmt(value));
        return *this;
    }
    JsonObject& text(const std::string& key, const std::string& value) {
        raw(key, "\"" + value + "\"");
        return *this;
    }
    JsonObject& raw(const std::string& key, const std::string& value) {
        body_ += body_.empty() ? "" : ", ";
        body_ += "\"" + key + "\": " + value;
        return *this;
    }
    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;
};

std::string json_array(const std::vector<std::string>& items, bool multiline = true) {
    std::string s = "[";
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (multiline) s += "\n  ";
        s += items[k];
        if (k + 1 < items.size()) s += multiline ? "," : ", ";
    }
    if (multiline && !items.empty()) s += "\n";
    return s + "]";
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw CLI::ValidationError("--out", "cannot open " + out_path);
    f << payload << "\n";
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            values.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "cannot parse integer list '" + text + "'");
        }
    }
    if (values.empty()) throw CLI::ValidationError(what, "empty list");
    return values;
}

/// "5" -> {5};  "1..20" -> {1,...,20} inclusive.
std::vector<int> parse_range(const std::string& text, const char* what) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) return parse_int_list(text, what);
    try {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument(text);
        std::vector<int> values;
        for (int v = lo; v <= hi; ++v) values.push_back(v);
        return values;
    } catch (const std::exception&) {
        throw CLI::ValidationError(what, "cannot parse range '" + text + "'");
    }
}

bool spectral_route_fits(int d, int N) {
    return d * usid::sym_dim(d, N) * usid::sym_dim(d, N) <= usid::kMaxCompressedDim;
}

// ---------------------------------------------------------------------------
// pmax

void sort_unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

int run_pmax(std::vector<int> ds, std::vector<int> ns, double tol, const std::string& output,
             const std::string& out_path) {
    sort_unique(ds);
    sort_unique(ns);
    struct Row {
        int d, N;
        double p, limit;
        std::optional<bool> agreement;
    };
    std::vector<Row> rows;
    for (int d : ds)
        for (int N : ns) {
            Row r{d, N, usid::pmax_identification(d, N), usid::pmax_discrimination(d), {}};
            if (spectral_route_fits(d, N))
                r.agreement = std::abs(usid::mean_success_optimal_spectral(d, N) - r.p) <= tol;
            rows.push_back(r);
        }

    if (output == "csv") {
        std::string csv = "d,N,p_identification,p_discrimination_limit,method_agreement\n";
        for (const auto& r : rows)
            csv += fmt(r.d) + "," + fmt(r.N) + "," + fmt(r.p) + "," + fmt(r.limit) + "," +
                   (r.agreement ? fmt(*r.agreement) : std::string("null")) + "\n";
        csv.pop_back();
        emit(csv, out_path);
    } else if (rows.size() == 1) {
        const auto& r = rows.front();
        emit(JsonObject{}
                 .field("p_identification", r.p)
                 .field("p_discrimination_limit", r.limit)
                 .raw("method_agreement", r.agreement ? fmt(*r.agreement) : "null")
                 .str(),
             out_path);
    } else {
        std::vector<std::string> items;
        for (const auto& r : rows)
            items.push_back(JsonObject{}
                                .field("d", r.d)
                                .field("N", r.N)
                                .field("p_identification", r.p)
                                .field("p_discrimination_limit", r.limit)
                                .raw("method_agreement", r.agreement ? fmt(*r.agreement) : "null")
                                .str());
        emit(json_array(items), out_path);
    }
    for (const auto& r : rows)
        if (r.agreement && !*r.agreement) return kExitCheckFailed;
    return kExitOk;
}

// ---------------------------------------------------------------------------
// figure

std::string render_figure_svg(const std::vector<int>& ds, const std::vector<int>& ns) {
    const double w = 640, h = 420, ml = 60, mr = 20, mt = 20, mb = 45;
    const int nmin = ns.front(), nmax = ns.back();
    double ymax = 0.0;
    for (int d : ds) ymax = std::max(ymax, usid::pmax_discrimination(d));
    ymax *= 1.08;
    auto xc = [&](double n) {
        return ml + (w - ml - mr) * (nmax > nmin ? (n - nmin) / (nmax - nmin) : 0.5);
    };
    auto yc = [&](double p) { return h - mb - (h - mt - mb) * (p / ymax); };
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double p = ymax * t / 4.0;
        char label[32];
        std::snprintf(label, sizeof label, "%.3f", p);
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << yc(p) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << label << "</text>\n";
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << yc(p) << "\" x2=\"" << ml << "\" y2=\""
            << yc(p) << "\" stroke=\"black\"/>\n";
    }
    const int xstep = std::max(1, (nmax - nmin) / 10);
    for (int n = nmin; n <= nmax; n += xstep) {
        svg << "<text x=\"" << xc(n) << "\" y=\"" << h - mb + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << n << "</text>\n";
        svg << "<line x1=\"" << xc(n) << "\" y1=\"" << h - mb << "\" x2=\"" << xc(n)
            << "\" y2=\"" << h - mb + 4 << "\" stroke=\"black\"/>\n";
    }
    svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
        << "\" text-anchor=\"middle\" font-size=\"13\">number of copies N</text>\n";
    svg << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (mt + h - mb) / 2 << ")\">mean success probability</text>\n";

    int ci = 0;
    for (int d : ds) {
        const char* color = palette[ci++ % 6];
        const double limit = usid::pmax_discrimination(d);
        svg << "<line x1=\"" << ml << "\" y1=\"" << yc(limit) << "\" x2=\"" << w - mr
            << "\" y2=\"" << yc(limit) << "\" stroke=\"" << color
            << "\" stroke-dasharray=\"6 4\" opacity=\"0.7\"/>\n";
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (int n : ns) svg << xc(n) << "," << yc(usid::pmax_identification(d, n)) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << w - mr - 4 << "\" y=\"" << yc(limit) - 5
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">d = " << d
            << "</text>\n";
    }
    svg << "</svg>";
    return svg.str();
}

int run_figure(std::vector<int> ds, std::vector<int> ns, const std::string& output,
               const std::string& out_path, const std::string& svg_path) {
    sort_unique(ds);
    sort_unique(ns);
    if (output == "csv") {
        std::string csv = "d,N,p_identification,p_discrimination\n";
        for (int d : ds)
            for (int N : ns)
                csv += fmt(d) + "," + fmt(N) + "," + fmt(usid::pmax_identification(d, N)) + "," +
                       fmt(usid::pmax_discrimination(d)) + "\n";
        csv.pop_back();
        emit(csv, out_path);
    } else {
        std::vector<std::string> items;
        for (int d : ds)
            for (int N : ns)
                items.push_back(JsonObject{}
                                    .field("d", d)
                                    .field("N", N)
                                    .field("p_identification", usid::pmax_identification(d, N))
                                    .field("p_discrimination", usid::pmax_discrimination(d))
                                    .str());
        emit(json_array(items), out_path);
    }
    if (!svg_path.empty()) {
        std::ofstream f(svg_path, std::ios::binary);
        if (!f) throw CLI::ValidationError("--svg", "cannot open " + svg_path);
        f << render_figure_svg(ds, ns) << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum

int run_spectrum(int d, int N, double tol, const std::string& output,
                 const std::string& out_path) {
    const auto dec = usid::decompose_A(d, N);
    const auto predicted = usid::expand_predicted_eigenvalues(dec.blocks);

    std::vector<double> block_dev(dec.blocks.size(), 0.0);
    Eigen::Index at = 0;
    double max_dev = 0.0;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b)
        for (std::int64_t k = 0; k < dec.blocks[b].multiplicity; ++k, ++at) {
            const double dev = std::abs(predicted(at) - dec.eigenvalues(at));
            block_dev[b] = std::max(block_dev[b], dev);
            max_dev = std::max(max_dev, dev);
        }

    if (output == "csv") {
        std::string csv = "partition,eigenvalue,multiplicity,max_abs_deviation\n";
        for (std::size_t b = 0; b < dec.blocks.size(); ++b)
            csv += dec.blocks[b].label.str() + "," + fmt(dec.blocks[b].eigenvalue) + "," +
                   fmt(dec.blocks[b].multiplicity) + "," + fmt(block_dev[b]) + "\n";
        csv.pop_back();
        emit(csv, out_path);
    } else {
        std::vector<std::string> items;
        for (std::size_t b = 0; b < dec.blocks.size(); ++b)
            items.push_back(JsonObject{}
                                .text("partition", dec.blocks[b].label.str())
                                .field("eigenvalue", dec.blocks[b].eigenvalue)
                                .field("multiplicity", dec.blocks[b].multiplicity)
                                .field("max_abs_deviation", block_dev[b])
                                .str());
        emit(JsonObject{}
                 .field("d", d)
                 .field("N", N)
                 .field("dim", static_cast<std::int64_t>(dec.eigenvalues.size()))
                 .raw("blocks", json_array(items))
                 .field("max_deviation", max_dev)
                 .field("within_tol", max_dev <= tol)
                 .str(),
             out_path);
    }
    return max_dev <= tol ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// povm-check

int run_povm_check(int d, int N, int pairs, double tol, std::uint64_t seed,
                   const std::string& out_path) {
    const auto ops = usid::build_problem_operators(d, N);
    const auto povm = usid::build_optimal_povm(ops);
    const auto rep = usid::validate_povm(povm, ops, pairs, tol, seed);
    const double success = usid::mean_success_from_povm(povm, ops);
    const double closed = usid::pmax_identification(d, N);
    const bool agreement = std::abs(success - closed) <= 1e-10;

    emit(JsonObject{}
             .field("d", d)
             .field("N", N)
             .field("min_eigenvalue_e0", rep.min_eigenvalue_e0)
             .field("min_eigenvalue_e1", rep.min_eigenvalue_e1)
             .field("min_eigenvalue_e2", rep.min_eigenvalue_e2)
             .field("completeness_residual", rep.completeness_residual)
             .field("noerror_residual_max", rep.noerror_residual_max)
             .field("noerror_operator_residual", rep.noerror_operator_residual)
             .field("pairs_tested", rep.pairs_tested)
             .field("success_probability", success)
             .field("closed_form", closed)
             .field("closed_form_agreement", agreement)
             .field("tol", tol)
             .field("passed", rep.passed && agreement)
             .str(),
         out_path);
    return (rep.passed && agreement) ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// mc

int run_mc(const std::string& kind, int d, int N, int n, std::int64_t samples,
           std::uint64_t seed, int workers, double tol, const std::string& out_path) {
    if (kind == "moment") {
        const double dist = usid::haar_moment_check(d, n, samples, seed);
        emit(JsonObject{}
                 .text("kind", kind)
                 .field("d", d)
                 .field("n", n)
                 .field("samples", samples)
                 .field("seed", static_cast<std::int64_t>(seed))
                 .field("frobenius_distance", dist)
                 .field("tol", tol)
                 .field("within_tol", dist <= tol)
                 .str(),
             out_path);
        return dist <= tol ? kExitOk : kExitCheckFailed;
    }

    usid::McEstimate est;
    double reference = 0.0;
    JsonObject obj;
    obj.text("kind", kind).field("d", d);
    if (kind == "identification") {
        est = usid::mc_mean_identification(d, N, samples, seed, workers);
        reference = usid::pmax_identification(d, N);
        obj.field("N", N);
    } else {
        est = usid::mc_mean_discrimination(d, samples, seed, workers);
        reference = usid::pmax_discrimination(d);
    }
    const bool agreement =
        std::abs(est.mean - reference) <= std::max(3.0 * est.std_error, 0.01 * reference);
    obj.field("samples", est.samples)
        .field("seed", static_cast<std::int64_t>(est.seed))
        .field("mean", est.mean)
        .field("std_error", est.std_error)
        .field("closed_form", reference)
        .field("agreement", agreement);
    emit(obj.str(), out_path);
    return agreement ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// racah

int run_racah(int N, const std::string& output, const std::string& out_path) {
    if (output == "csv") {
        std::string csv = "twoJ,r_pp,r_pm,r_mp,r_mm\n";
        for (int twoJ = 1; twoJ <= 2 * N - 1; twoJ += 2) {
            const auto r = usid::racah_matrix(N, twoJ);
            csv += fmt(twoJ) + "," + fmt(r.entries(0, 0)) + "," + fmt(r.entries(0, 1)) + "," +
                   fmt(r.entries(1, 0)) + "," + fmt(r.entries(1, 1)) + "\n";
        }
        csv.pop_back();
        emit(csv, out_path);
        return kExitOk;
    }
    std::vector<std::string> items;
    for (int twoJ = 1; twoJ <= 2 * N - 1; twoJ += 2) {
        const auto r = usid::racah_matrix(N, twoJ);
        const double ortho =
            (r.entries * r.entries.transpose() - Eigen::Matrix2d::Identity())
                .cwiseAbs()
                .maxCoeff();
        items.push_back(
            JsonObject{}
                .field("twoJ", twoJ)
                .raw("entries", "[[" + fmt(r.entries(0, 0)) + ", " + fmt(r.entries(0, 1)) +
                                    "], [" + fmt(r.entries(1, 0)) + ", " +
                                    fmt(r.entries(1, 1)) + "]]")
                .field("orthogonality_residual", ortho)
                .str());
    }
    const double via_racah = usid::qubit_pmax_via_racah(N);
    const double closed = usid::pmax_identification_qubit(N);
    emit(JsonObject{}
             .field("N", N)
             .raw("blocks", json_array(items))
             .field("p_identification_via_racah", via_racah)
             .field("closed_form", closed)
             .field("agreement", std::abs(via_racah - closed) <= 1e-12)
             .str(),
         out_path);
    return std::abs(via_racah - closed) <= 1e-12 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// oracle

int run_oracle(int d, int N, double tol, const std::string& out_path) {
    const Eigen::MatrixXd b = usid::embed_compressed(d, N);
    double residual_s[2];
    for (int a : {1, 2}) {
        const Eigen::MatrixXd full =
            usid::subset_symmetrizer(d, 2 * N + 1, usid::pair_systems(N, a));
        const Eigen::MatrixXd pulled = b.transpose() * full * b;
        residual_s[a - 1] =
            (pulled - usid::symmetrizer_0a(d, N, a).entries).cwiseAbs().maxCoeff();
    }
    const Eigen::MatrixXd pulled_t =
        b.transpose() * usid::full_space_exchange(d, N) * b;
    const double residual_t =
        (pulled_t - usid::exchange_12(d, N).entries).cwiseAbs().maxCoeff();
    const double max_residual = std::max({residual_s[0], residual_s[1], residual_t});

    emit(JsonObject{}
             .field("d", d)
             .field("N", N)
             .field("full_dim", static_cast<std::int64_t>(b.rows()))
             .field("compressed_dim", static_cast<std::int64_t>(b.cols()))
             .field("residual_s01", residual_s[0])
             .field("residual_s02", residual_s[1])
             .field("residual_exchange", residual_t)
             .field("max_residual", max_residual)
             .field("tol", tol)
             .field("within_tol", max_residual <= tol)
             .str(),
         out_path);
    return max_residual <= tol ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"identification of a pure state with one of two unknown reference states:\n"
                 "optimal POVMs, spectra, closed forms, and Monte Carlo checks"};
    app.require_subcommand(1);

    std::string d_text = "2", n_text = "1", n_power_text = "2";
    std::int64_t samples = 200000;
    std::uint64_t seed = 12345;
    int pairs = 100;
    int workers = 0;
    double tol = -1.0;  // command-specific default when unset
    std::string output = "json", out_path, svg_path, kind = "identification";

    auto add_common = [&](CLI::App* cmd, bool with_n) {
        cmd->add_option("--d", d_text, "dimension, or comma list where supported");
        if (with_n) cmd->add_option("--N", n_text, "copies, or inclusive range A..B");
        cmd->add_option("--output", output, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", out_path, "write the report to this file");
        cmd->add_option("--tol", tol, "check tolerance")->check(CLI::PositiveNumber);
    };

    auto* pmax = app.add_subcommand(
        "pmax", "optimal identification probability, closed form vs spectral");
    add_common(pmax, true);

    auto* figure =
        app.add_subcommand("figure", "identification vs discrimination sweep data");
    add_common(figure, true);
    figure->add_option("--svg", svg_path, "also render an SVG line chart to this file");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue blocks of the operator A");
    add_common(spectrum, true);

    auto* povm_check =
        app.add_subcommand("povm-check", "axioms and no-error residuals of the optimal POVM");
    add_common(povm_check, true);
    povm_check->add_option("--pairs", pairs, "Haar-random reference pairs to test");
    povm_check->add_option("--seed", seed, "stream seed");

    auto* mc = app.add_subcommand("mc", "Monte Carlo averages against the closed forms");
    add_common(mc, true);
    mc->add_option("--kind", kind, "identification, discrimination, or moment")
        ->check(CLI::IsMember({"identification", "discrimination", "moment"}));
    mc->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
    mc->add_option("--seed", seed, "stream seed");
    mc->add_option("--workers", workers, "worker threads (speed only, never results)");
    mc->add_option("--n", n_power_text, "tensor power for --kind moment");

    auto* racah = app.add_subcommand("racah", "qubit recoupling matrices and the sum they give");
    racah->add_option("--N", n_text, "copies");
    racah->add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    racah->add_option("--out", out_path, "write the report to this file");

    auto* oracle = app.add_subcommand(
        "oracle", "compressed operators vs the full-tensor-space permutation average");
    add_common(oracle, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(pmax)) {
            return run_pmax(parse_int_list(d_text, "--d"), parse_range(n_text, "--N"),
                            tol > 0 ? tol : 1e-10, output, out_path);
        }
        if (app.got_subcommand(figure)) {
            return run_figure(parse_int_list(d_text, "--d"), parse_range(n_text, "--N"), output,
                              out_path, svg_path);
        }
        if (app.got_subcommand(spectrum)) {
            return run_spectrum(std::stoi(d_text), std::stoi(n_text), tol > 0 ? tol : 1e-10,
                                output, out_path);
        }
        if (app.got_subcommand(povm_check)) {
            return run_povm_check(std::stoi(d_text), std::stoi(n_text), pairs,
                                  tol > 0 ? tol : 1e-12, seed, out_path);
        }
        if (app.got_subcommand(mc)) {
            return run_mc(kind, std::stoi(d_text), std::stoi(n_text), std::stoi(n_power_text),
                          samples, seed, workers, tol > 0 ? tol : 0.01, out_path);
        }
        if (app.got_subcommand(racah)) {
            return run_racah(std::stoi(n_text), output, out_path);
        }
        if (app.got_subcommand(oracle)) {
            return run_oracle(std::stoi(d_text), std::stoi(n_text), tol > 0 ? tol : 1e-12,
                              out_path);
        }
    } catch (const CLI::Error& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "usid: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
