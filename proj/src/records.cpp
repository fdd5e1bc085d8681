#include "horocoho/records.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace horocoho {

std::string format_full(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x,
                             std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

namespace {

// missing values sort first; ties fall through to the next key
int cmp_opt(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
    if (!a) return 0;
    if (*a < *b) return -1;
    if (*a > *b) return 1;
    return 0;
}

bool record_less(const ExperimentRecord& a, const ExperimentRecord& b) {
    if (int c = cmp_opt(a.nu_abs, b.nu_abs)) return c < 0;
    if (int c = cmp_opt(a.lambda, b.lambda)) return c < 0;
    if (int c = cmp_opt(a.L, b.L)) return c < 0;
    if (int c = cmp_opt(a.s, b.s)) return c < 0;
    if (int c = cmp_opt(a.sigma, b.sigma)) return c < 0;
    if (int c = cmp_opt(a.epsilon, b.epsilon)) return c < 0;
    return false;
}

void append_cell(std::string& out, const std::optional<double>& v, bool last) {
    if (v) out += format_full(*v);
    if (!last) out += ',';
}

} // namespace

std::string render_csv(std::vector<ExperimentRecord> records) {
    std::stable_sort(records.begin(), records.end(), record_less);
    std::string out =
        "nu_abs,lambda,L,s,sigma,epsilon,norm_f,norm_g,norm_green,ratio,slope\n";
    for (const ExperimentRecord& r : records) {
        append_cell(out, r.nu_abs, false);
        append_cell(out, r.lambda, false);
        append_cell(out, r.L, false);
        append_cell(out, r.s, false);
        append_cell(out, r.sigma, false);
        append_cell(out, r.epsilon, false);
        append_cell(out, r.norm_f, false);
        append_cell(out, r.norm_g, false);
        append_cell(out, r.norm_green, false);
        append_cell(out, r.ratio, false);
        append_cell(out, r.slope, true);
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<ExperimentRecord>& records,
              const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("emit_csv: cannot open " + path);
    const std::string body = render_csv(records);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f)
        throw std::runtime_error("emit_csv: write failed for " + path);
}

} // namespace horocoho
