#include "survimp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace survimp {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& field, int row, const char* what) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw Error("row " + std::to_string(row) + ": bad " + what + " value '" +
                    field + "'");
    return v;
}

std::vector<std::string> non_empty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::string population_to_csv(const FinitePopulation& pop) {
    std::ostringstream os;
    os << "x1,x2,x3,x4,x5,x6,y,delta\n";
    for (std::int64_t i = 0; i < pop.size; ++i) {
        for (int c = 0; c < kNumCovariates; ++c)
            os << format_double(pop.x_at(i, c)) << ',';
        os << format_double(pop.y[i]) << ',' << int(pop.delta[i]) << '\n';
    }
    return os.str();
}

FinitePopulation population_from_csv(const std::string& text) {
    const std::vector<std::string> lines = non_empty_lines(text);
    if (lines.empty() || split(lines[0], ',').size() != kNumCovariates + 2)
        throw Error("population CSV must have header x1,...,x6,y,delta");
    FinitePopulation pop;
    pop.size = static_cast<std::int64_t>(lines.size()) - 1;
    if (pop.size < 1) throw Error("empty population");
    pop.x.resize(static_cast<std::size_t>(pop.size) * kNumCovariates);
    pop.y.resize(pop.size);
    pop.noise.assign(pop.size, 0.0);
    pop.delta.resize(pop.size);
    for (std::int64_t i = 0; i < pop.size; ++i) {
        const int row = static_cast<int>(i) + 2;  // 1-based, after header
        const auto fields = split(lines[i + 1], ',');
        if (fields.size() != kNumCovariates + 2)
            throw Error("row " + std::to_string(row) + ": wrong field count");
        for (int c = 0; c < kNumCovariates; ++c)
            pop.x[static_cast<std::size_t>(i) * kNumCovariates + c] =
                parse_double(fields[c], row, "covariate");
        pop.y[i] = parse_double(fields[kNumCovariates], row, "y");
        const std::string& d = fields[kNumCovariates + 1];
        if (d != "0" && d != "1")
            throw Error("row " + std::to_string(row) + ": delta must be 0 or 1");
        pop.delta[i] = d == "1" ? 1 : 0;
    }
    return pop;
}

std::string sample_to_csv(const SurveySample& sample) {
    std::ostringstream os;
    for (int c = 0; c < sample.p; ++c) os << 'x' << (c + 1) << ',';
    os << "y,delta,pi\n";
    for (int i = 0; i < sample.n(); ++i) {
        for (int c = 0; c < sample.p; ++c)
            os << format_double(sample.x_at(i, c)) << ',';
        if (sample.delta[i]) os << format_double(sample.y[i]);
        os << ',' << int(sample.delta[i]) << ','
           << format_double(sample.pi[i]) << '\n';
    }
    return os.str();
}

SurveySample sample_from_csv(const std::string& text, std::int64_t popsize) {
    if (popsize < 1) throw Error("population size must be >= 1");
    const std::vector<std::string> lines = non_empty_lines(text);
    if (lines.empty()) throw Error("empty sample CSV");
    const auto header = split(lines[0], ',');
    const int ncols = static_cast<int>(header.size());
    const int p = ncols - 3;
    if (p < 1 || header[p] != "y" || header[p + 1] != "delta" ||
        header[p + 2] != "pi")
        throw Error("sample CSV header must be x1,...,xp,y,delta,pi");
    for (int c = 0; c < p; ++c)
        if (header[c] != "x" + std::to_string(c + 1))
            throw Error("sample CSV header must be x1,...,xp,y,delta,pi");

    SurveySample s;
    s.p = p;
    s.popsize = popsize;
    const int n = static_cast<int>(lines.size()) - 1;
    if (n < 1) throw Error("sample CSV has no data rows");
    for (int i = 0; i < n; ++i) {
        const int row = i + 2;
        const auto fields = split(lines[i + 1], ',');
        if (static_cast<int>(fields.size()) != ncols)
            throw Error("row " + std::to_string(row) + ": wrong field count");
        for (int c = 0; c < p; ++c)
            s.x.push_back(parse_double(fields[c], row, "covariate"));
        const std::string& d = fields[p + 1];
        if (d != "0" && d != "1")
            throw Error("row " + std::to_string(row) + ": delta must be 0 or 1");
        const bool respondent = d == "1";
        if (respondent && fields[p].empty())
            throw Error("row " + std::to_string(row) +
                        ": delta=1 but y is missing");
        s.y.push_back(fields[p].empty() ? 0.0
                                        : parse_double(fields[p], row, "y"));
        s.delta.push_back(respondent ? 1 : 0);
        const double pi = parse_double(fields[p + 2], row, "pi");
        if (!(pi > 0.0) || pi > 1.0)
            throw Error("row " + std::to_string(row) + ": pi must be in (0,1]");
        s.pi.push_back(pi);
        s.weights.push_back(1.0 / (static_cast<double>(popsize) * pi));
        s.ids.push_back(i);
    }
    return s;
}

std::string report_to_json(const EstimateReport& report,
                           bool include_replicates) {
    nlohmann::ordered_json j;
    j["method"] = method_name(report.method);
    j["variance_scheme"] = scheme_name(report.scheme);
    j["mu_hat"] = report.mu_hat;
    j["v_hat"] = report.v_hat;
    j["ci"] = {report.ci.first, report.ci.second};
    j["level"] = 0.95;
    j["n"] = report.n;
    j["respondents"] = report.respondents;
    j["replicates"] = report.replicate_count;
    if (include_replicates) j["replicate_values"] = report.replicates;
    return j.dump(2) + "\n";
}

std::string replicates_to_csv(std::span<const double> replicates) {
    std::ostringstream os;
    os << "k,mu_rep\n";
    for (std::size_t k = 0; k < replicates.size(); ++k)
        os << k << ',' << format_double(replicates[k]) << '\n';
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace survimp
