#include "mbhalton/mbhalton.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace {

using nlohmann::ordered_json;
using namespace mbhalton;

struct Globals
{
    int digits = 15;
    unsigned threads = 0;
    std::string output;
    bool timing = false;
};

class Sink
{
  public:
    explicit Sink(const std::string& path, bool binary = false)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
            if (!*file_)
                throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

double elapsed(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void emit_json(const Globals& g, ordered_json j, std::chrono::steady_clock::time_point t0)
{
    if (g.timing)
        j["wall_seconds"] = elapsed(t0);
    Sink sink(g.output);
    sink.out() << j.dump(2) << '\n';
}

ordered_json json_number(double x, int digits)
{
    return ordered_json::parse(io::format_fixed(x, digits));
}

std::uint64_t max_index_for(std::uint64_t count) { return count + 1; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"beta-adic van der Corput and Halton sequences for m-bonacci bases"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "read key=value defaults from a file");

    Globals g;
    app.add_option("--digits", g.digits, "decimal places in CSV and JSON numbers")->check(CLI::Range(1, 30));
    app.add_option("--threads", g.threads, "worker threads (0 = automatic)")->envname("MBHALTON_THREADS");
    app.add_option("-o,--output", g.output, "output file (default stdout)");
    app.add_flag("--timing", g.timing, "add wall_seconds to JSON reports");

    // expand
    auto* expand = app.add_subcommand("expand", "greedy m-bonacci expansion of n");
    int e_m = 2;
    std::uint64_t e_n = 0;
    expand->add_option("--m", e_m, "order m")->required()->check(CLI::Range(2, 16));
    expand->add_option("--n", e_n, "non-negative integer")->required();

    // seq
    auto* seq = app.add_subcommand("seq", "van der Corput and Halton sequences as CSV");
    seq->require_subcommand(1);
    auto* seq_vdc = seq->add_subcommand("vdc", "one-dimensional sequence V(n)");
    int v_m = 2;
    std::uint64_t v_count = 0;
    seq_vdc->add_option("--m", v_m, "order m")->required()->check(CLI::Range(2, 16));
    seq_vdc->add_option("--count", v_count, "number of points")->required()->check(CLI::PositiveNumber);
    auto* seq_halton = seq->add_subcommand("halton", "multi-dimensional Halton sequence");
    std::vector<int> h_ms;
    std::uint64_t h_count = 0;
    seq_halton->add_option("--ms", h_ms, "distinct orders, comma separated")->required()->delimiter(',');
    seq_halton->add_option("--count", h_count, "number of points")->required()->check(CLI::PositiveNumber);

    // fractal
    auto* fractal = app.add_subcommand("fractal", "Rauzy fractal point cloud as CSV or PPM");
    int f_m = 3;
    std::size_t f_depth = 100'000;
    std::string f_format = "csv";
    int f_width = 512;
    bool f_lifted = false;
    fractal->add_option("--m", f_m, "order m")->required()->check(CLI::Range(2, 8));
    fractal->add_option("--depth", f_depth, "number of points")->check(CLI::PositiveNumber);
    fractal->add_option("--format", f_format, "csv or ppm")->check(CLI::IsMember({"csv", "ppm"}));
    fractal->add_option("--width", f_width, "image width in pixels")->check(CLI::Range(8, 8192));
    fractal->add_flag("--lifted", f_lifted, "unreduced coordinates instead of torus coordinates");

    // disc
    auto* disc = app.add_subcommand("disc", "star discrepancy of Halton points or a CSV point set");
    std::vector<int> d_ms;
    std::uint64_t d_count = 0;
    std::vector<std::uint64_t> d_fit;
    std::string d_input;
    double d_budget = 4e9;
    disc->add_option("--ms", d_ms, "Halton orders")->delimiter(',');
    disc->add_option("--count", d_count, "number of Halton points")->check(CLI::PositiveNumber);
    disc->add_option("--fit", d_fit, "point counts for a decay fit")->delimiter(',');
    disc->add_option("--input", d_input, "CSV point set with header x1,...,xs")->check(CLI::ExistingFile);
    disc->add_option("--budget", d_budget, "corner evaluation budget before falling back to a lower bound");

    // dim
    auto* dim = app.add_subcommand("dim", "box-counting dimension of the fractal boundary");
    int b_m = 3;
    std::size_t b_depth = 1'000'000;
    std::vector<int> b_levels{4, 5, 6, 7, 8, 9};
    std::string b_rule = "outer";
    dim->add_option("--m", b_m, "order m")->required()->check(CLI::Range(2, 8));
    dim->add_option("--depth", b_depth, "cloud size")->check(CLI::PositiveNumber);
    dim->add_option("--levels", b_levels, "grid exponents")->delimiter(',');
    dim->add_option("--rule", b_rule, "outer or contacts")->check(CLI::IsMember({"outer", "contacts"}));

    // exponent
    auto* exponent = app.add_subcommand("exponent", "discrepancy exponent for given orders and boundary dimensions");
    std::vector<int> x_ms;
    std::vector<double> x_dims;
    exponent->add_option("--ms", x_ms, "distinct orders")->required()->delimiter(',');
    exponent->add_option("--dims", x_dims, "boundary dimensions")->required()->delimiter(',');

    // local-disc
    auto* local = app.add_subcommand("local-disc", "local discrepancy delta_k of the vdC sequence");
    int l_m = 2;
    std::size_t l_k = 1;
    std::uint64_t l_count = 0;
    std::size_t l_cap = default_local_level_cap;
    local->add_option("--m", l_m, "order m")->required()->check(CLI::Range(2, 16));
    local->add_option("--k", l_k, "level")->required();
    local->add_option("--count", l_count, "number of points")->required()->check(CLI::PositiveNumber);
    local->add_option("--cap", l_cap, "largest admissible level");

    // verify
    auto* verify = app.add_subcommand("verify", "run the invariant suite and print a pass/fail table");
    bool full = false;
    auto* quick_flag = verify->add_flag("--quick", "small sizes (default)");
    verify->add_flag("--full", full, "acceptance sizes")->excludes(quick_flag);

    // reproduce-example
    auto* reproduce = app.add_subcommand("reproduce-example", "exponent and measured decay for orders (2,3)");
    int r_top = 13;
    reproduce->add_option("--top", r_top, "largest power of two in the fit")->check(CLI::Range(11, 16));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (expand->parsed()) {
            if (e_n == std::numeric_limits<std::uint64_t>::max())
                throw std::out_of_range("n too large");
            auto sys = make_system(e_m, e_n + 1);
            auto e = encode(sys, e_n);
            Sink sink(g.output);
            auto& out = sink.out();
            out << format_digits(e) << '\n' << e_n << " =";
            bool first = true;
            for (std::size_t j = e.size(); j-- > 0;)
                if (e.digits[j]) {
                    out << (first ? " " : " + ") << "F_" << j << "(" << sys.term(j) << ")";
                    first = false;
                }
            if (first)
                out << " 0";
            out << '\n';
            if (decode(sys, e) != e_n)
                throw std::logic_error("roundtrip failed");
        } else if (seq_vdc->parsed()) {
            auto sys = make_system(v_m, max_index_for(v_count));
            Sink sink(g.output);
            auto& out = sink.out();
            out << "n,value\n";
            for (std::uint64_t n = 0; n < v_count; ++n)
                out << n << ',' << io::format_fixed(vdc(sys, n), g.digits) << '\n';
        } else if (seq_halton->parsed()) {
            auto cfg = make_halton_config(h_ms, max_index_for(h_count));
            Sink sink(g.output);
            auto& out = sink.out();
            out << "n";
            for (std::size_t i = 1; i <= h_ms.size(); ++i)
                out << ",x" << i;
            out << '\n';
            for (std::uint64_t n = 0; n < h_count; ++n) {
                out << n;
                for (double x : halton(cfg, n))
                    out << ',' << io::format_fixed(x, g.digits);
                out << '\n';
            }
        } else if (fractal->parsed()) {
            auto sys = make_system(f_m, f_depth + 1);
            auto cloud = build_cloud(sys, f_depth);
            Sink sink(g.output, f_format == "ppm");
            if (f_format == "csv")
                io::write_cloud_csv(sink.out(), cloud, g.digits, f_lifted);
            else
                io::write_cloud_ppm(sink.out(), cloud, f_width, f_lifted);
        } else if (disc->parsed()) {
            const StarOptions opt{d_budget, g.threads};
            ordered_json j;
            if (!d_fit.empty()) {
                if (d_ms.empty() || !d_input.empty())
                    throw std::invalid_argument("--fit needs --ms and no --input");
                auto samples = verify::halton_decay_samples(d_ms, d_fit, g.threads);
                auto fit = decay_fit(samples);
                j["method"] = to_string(DiscrepancyMethod::brute_force_sD);
                j["N"] = samples.back().first;
                j["s"] = d_ms.size();
                j["value"] = json_number(samples.back().second, g.digits);
                j["exponent"] = json_number(fit.exponent, g.digits);
                j["r2"] = json_number(fit.r2, g.digits);
            } else {
                PointSet ps;
                if (!d_input.empty()) {
                    std::ifstream in(d_input);
                    ps = io::read_points_csv(in);
                } else {
                    if (d_ms.empty() || d_count == 0)
                        throw std::invalid_argument("disc needs --input or --ms with --count");
                    auto cfg = make_halton_config(d_ms, max_index_for(d_count));
                    ps.dims = d_ms.size();
                    for (std::uint64_t n = 0; n < d_count; ++n)
                        ps.push(halton(cfg, n));
                }
                DiscrepancyReport rep;
                if (ps.dims == 1) {
                    rep.n = ps.size();
                    rep.dims = 1;
                    rep.value = star_disc_1d(ps.coords);
                    rep.method = DiscrepancyMethod::exact1d;
                } else {
                    rep = star_disc_report(ps, opt);
                }
                j["method"] = to_string(rep.method);
                j["N"] = rep.n;
                j["s"] = rep.dims;
                j["value"] = json_number(rep.value, g.digits);
            }
            emit_json(g, j, t0);
        } else if (dim->parsed()) {
            auto sys = make_system(b_m, b_depth + 1);
            auto cloud = build_cloud(sys, b_depth);
            auto rule = b_rule == "outer" ? BoundaryRule::outer_boundary : BoundaryRule::subtile_contacts;
            auto est = box_dim_boundary(cloud, b_levels, rule);
            ordered_json j;
            j["method"] = b_rule == "outer" ? "box_counting_outer" : "box_counting_contacts";
            j["N"] = cloud.size();
            j["s"] = cloud.dims();
            j["value"] = json_number(est.slope, g.digits);
            j["r2"] = json_number(est.r2, g.digits);
            j["levels"] = est.levels;
            j["counts"] = est.counts;
            emit_json(g, j, t0);
        } else if (exponent->parsed()) {
            Sink sink(g.output);
            sink.out() << io::format_fixed(theorem_exponent(x_ms, x_dims), 6) << '\n';
        } else if (local->parsed()) {
            const std::uint64_t level_span = std::uint64_t{1} << std::min<std::size_t>(l_k + 1, 62);
            auto sys = make_system(l_m, std::max(l_count + 1, level_span));
            ordered_json j;
            j["k"] = l_k;
            j["N"] = l_count;
            j["delta"] = json_number(local_discrepancy(sys, l_k, l_count, l_cap), g.digits);
            emit_json(g, j, t0);
        } else if (verify->parsed()) {
            auto scale = full ? verify::Scale::full : verify::Scale::quick;
            Sink sink(g.output);
            auto& out = sink.out();
            bool all = true;
            out << std::left << std::setw(4) << "id" << std::setw(6) << "pass" << std::setw(42) << "check"
                << "detail\n";
            for (const auto& check : verify::all_checks()) {
                auto r = check(scale);
                all = all && r.passed;
                out << std::left << std::setw(4) << r.id << std::setw(6) << (r.passed ? "PASS" : "FAIL")
                    << std::setw(42) << r.name << r.detail;
                if (g.timing)
                    out << " [" << io::format_fixed(r.seconds, 2) << "s]";
                out << std::endl;
            }
            return all ? 0 : 1;
        } else if (reproduce->parsed()) {
            const int ms[] = {2, 3};
            const double ds[] = {0.0, 1.09336};
            std::vector<std::uint64_t> counts;
            for (int e = 8; e <= r_top; ++e)
                counts.push_back(std::uint64_t{1} << e);
            auto samples = verify::halton_decay_samples(ms, counts, g.threads);
            auto fit = decay_fit(samples);
            Sink sink(g.output);
            auto& out = sink.out();
            out << "theorem exponent (2,3), d=(0,1.09336): " << io::format_fixed(theorem_exponent(ms, ds), 6) << '\n';
            for (const auto& [n, d] : samples)
                out << "N=" << static_cast<std::uint64_t>(n) << " D_N=" << io::format_fixed(d, g.digits) << '\n';
            out << "measured decay slope: " << io::format_fixed(fit.exponent, 6)
                << " (r2 " << io::format_fixed(fit.r2, 4) << ")\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "mbhalton: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
