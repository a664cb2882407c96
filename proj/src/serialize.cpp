//
// Directory bundles: manifest plus CSV blocks, bit-exact round trips.
//

#include "kronsvd/serialize.hpp"

#include "kronsvd/errors.hpp"
#include "kronsvd/image_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace kronsvd {

namespace {

// Manifest lines are "key value..." pairs, one per line, comments with #.
std::map<std::string, std::string> parse_manifest(const std::string& path) {
    const std::string text = read_file(path);
    std::map<std::string, std::string> kv;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t eol = text.find('\n', start);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(start, eol - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] != '#') {
            const std::size_t space = line.find(' ');
            if (space == std::string::npos || space == 0)
                throw ParseError(path + ": line " + std::to_string(line_no) +
                                 ": expected 'key value'");
            const std::string key = line.substr(0, space);
            if (kv.count(key))
                throw ParseError(path + ": line " + std::to_string(line_no) +
                                 ": duplicate key '" + key + "'");
            kv[key] = line.substr(space + 1);
        }
        start = eol + 1;
        ++line_no;
    }
    return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv,
                        const std::string& path, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw ParseError(path + ": missing manifest key '" + key + "'");
    return it->second;
}

std::size_t need_count(const std::map<std::string, std::string>& kv,
                       const std::string& path, const std::string& key) {
    const std::string& raw = need(kv, path, key);
    std::size_t value = 0;
    const auto res = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (res.ec != std::errc() || res.ptr != raw.data() + raw.size())
        throw ParseError(path + ": manifest key '" + key + "': bad count '" +
                         raw + "'");
    return value;
}

std::vector<double> parse_double_list(const std::string& path,
                                      const std::string& key,
                                      const std::string& raw) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        while (pos < raw.size() && raw[pos] == ' ') ++pos;
        if (pos >= raw.size()) break;
        double value = 0.0;
        const auto res =
            std::from_chars(raw.data() + pos, raw.data() + raw.size(), value);
        if (res.ec != std::errc() || res.ptr == raw.data() + pos)
            throw ParseError(path + ": manifest key '" + key +
                             "': bad number in '" + raw + "'");
        out.push_back(value);
        pos = static_cast<std::size_t>(res.ptr - raw.data());
    }
    return out;
}

void check_format(const std::map<std::string, std::string>& kv,
                  const std::string& path, const std::string& want) {
    if (need(kv, path, "format") != want)
        throw ParseError(path + ": format is '" + need(kv, path, "format") +
                         "', want '" + want + "'");
}

std::string term_name(std::size_t index, char factor) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "term_%03zu_%c.csv", index, factor);
    return buf;
}

DenseMatrix load_square(const std::string& path, std::size_t n,
                        const char* what) {
    DenseMatrix m = load_csv_matrix(path);
    if (m.rows() != n || m.cols() != n)
        throw ParseError(path + ": " + what + " must be " + std::to_string(n) +
                         " x " + std::to_string(n) + ", got " +
                         std::to_string(m.rows()) + " x " +
                         std::to_string(m.cols()));
    return m;
}

std::vector<double> load_vector_sized(const std::string& path, std::size_t len,
                                      const char* what) {
    std::vector<double> v = load_csv_vector(path);
    if (v.size() != len)
        throw ParseError(path + ": " + what + " must have " +
                         std::to_string(len) + " entries, got " +
                         std::to_string(v.size()));
    return v;
}

void save_factor_svd(const std::string& dir, const FactorSvd& fsvd) {
    save_csv_matrix(dir + "/u_a.csv", fsvd.u_a);
    save_csv_matrix(dir + "/v_a.csv", fsvd.v_a);
    save_csv_vector(dir + "/s_a.csv", fsvd.s_a);
    save_csv_matrix(dir + "/u_b.csv", fsvd.u_b);
    save_csv_matrix(dir + "/v_b.csv", fsvd.v_b);
    save_csv_vector(dir + "/s_b.csv", fsvd.s_b);
}

FactorSvd load_factor_svd(const std::string& dir, std::size_t n) {
    FactorSvd fsvd;
    fsvd.u_a = load_square(dir + "/u_a.csv", n, "u_a");
    fsvd.v_a = load_square(dir + "/v_a.csv", n, "v_a");
    fsvd.s_a = load_vector_sized(dir + "/s_a.csv", n, "s_a");
    fsvd.u_b = load_square(dir + "/u_b.csv", n, "u_b");
    fsvd.v_b = load_square(dir + "/v_b.csv", n, "v_b");
    fsvd.s_b = load_vector_sized(dir + "/s_b.csv", n, "s_b");
    return fsvd;
}

std::vector<std::size_t> load_perm(const std::string& path, std::size_t n2) {
    std::vector<std::size_t> map = load_csv_indices(path);
    if (map.size() != n2)
        throw ParseError(path + ": permutation must have " +
                         std::to_string(n2) + " entries");
    std::vector<char> seen(n2, 0);
    for (std::size_t v : map) {
        if (v >= n2 || seen[v])
            throw ParseError(path + ": not a permutation of 0.." +
                             std::to_string(n2 - 1));
        seen[v] = 1;
    }
    return map;
}

} // namespace

void save_kron_sum(const std::string& dir, const KroneckerSum& ksum) {
    if (ksum.terms.empty()) throw Error("save_kron_sum: empty sum");
    fs::create_directories(dir);
    std::ostringstream manifest;
    manifest << "format kron_sum\n";
    manifest << "version 1\n";
    manifest << "n " << ksum.n << '\n';
    manifest << "terms " << ksum.terms.size() << '\n';
    manifest << "kron_rank_full " << ksum.kron_rank_full << '\n';
    manifest << "weights";
    for (double w : ksum.weights) manifest << ' ' << format_double(w);
    manifest << '\n';
    write_file_atomic(dir + "/manifest.txt", manifest.str());
    for (std::size_t t = 0; t < ksum.terms.size(); ++t) {
        save_csv_matrix(dir + "/" + term_name(t, 'a'), ksum.terms[t].a);
        save_csv_matrix(dir + "/" + term_name(t, 'b'), ksum.terms[t].b);
    }
}

KroneckerSum load_kron_sum(const std::string& dir) {
    const std::string mpath = dir + "/manifest.txt";
    const auto kv = parse_manifest(mpath);
    check_format(kv, mpath, "kron_sum");
    KroneckerSum ksum;
    ksum.n = need_count(kv, mpath, "n");
    const std::size_t terms = need_count(kv, mpath, "terms");
    ksum.kron_rank_full = need_count(kv, mpath, "kron_rank_full");
    ksum.weights = parse_double_list(mpath, "weights", need(kv, mpath, "weights"));
    if (ksum.weights.size() != terms)
        throw ParseError(mpath + ": " + std::to_string(terms) + " terms but " +
                         std::to_string(ksum.weights.size()) + " weights");
    for (std::size_t t = 0; t < terms; ++t) {
        KronPair pair;
        pair.a = load_square(dir + "/" + term_name(t, 'a'), ksum.n, "factor a");
        pair.b = load_square(dir + "/" + term_name(t, 'b'), ksum.n, "factor b");
        ksum.terms.push_back(std::move(pair));
    }
    return ksum;
}

void save_implicit_tsvd(const std::string& dir, const ImplicitTsvd& tsvd) {
    fs::create_directories(dir);
    std::ostringstream manifest;
    manifest << "format implicit_tsvd\n";
    manifest << "version 1\n";
    manifest << "n " << tsvd.n << '\n';
    manifest << "k " << tsvd.k << '\n';
    write_file_atomic(dir + "/manifest.txt", manifest.str());
    save_factor_svd(dir, tsvd.fsvd);
    save_csv_indices(dir + "/perm_map.csv", tsvd.perm.map);
    save_csv_matrix(dir + "/u_t.csv", tsvd.u_t);
    save_csv_matrix(dir + "/v_t.csv", tsvd.v_t);
    save_csv_vector(dir + "/s_t.csv", tsvd.s_t);
}

ImplicitTsvd load_implicit_tsvd(const std::string& dir) {
    const std::string mpath = dir + "/manifest.txt";
    const auto kv = parse_manifest(mpath);
    check_format(kv, mpath, "implicit_tsvd");
    ImplicitTsvd tsvd;
    tsvd.n = need_count(kv, mpath, "n");
    tsvd.k = need_count(kv, mpath, "k");
    const std::size_t n2 = tsvd.n * tsvd.n;
    if (tsvd.k == 0 || tsvd.k > n2)
        throw ParseError(mpath + ": k out of range");
    tsvd.fsvd = load_factor_svd(dir, tsvd.n);
    tsvd.perm.map = load_perm(dir + "/perm_map.csv", n2);
    tsvd.perm.inverse_map.assign(n2, 0);
    for (std::size_t p = 0; p < n2; ++p)
        tsvd.perm.inverse_map[tsvd.perm.map[p]] = p;
    tsvd.u_t = load_square(dir + "/u_t.csv", tsvd.k, "u_t");
    tsvd.v_t = load_square(dir + "/v_t.csv", tsvd.k, "v_t");
    tsvd.s_t = load_vector_sized(dir + "/s_t.csv", tsvd.k, "s_t");
    return tsvd;
}

void save_baseline_tsvd(const std::string& dir, const BaselineTsvd& baseline) {
    fs::create_directories(dir);
    std::ostringstream manifest;
    manifest << "format baseline_tsvd\n";
    manifest << "version 1\n";
    manifest << "n " << baseline.n << '\n';
    write_file_atomic(dir + "/manifest.txt", manifest.str());
    save_factor_svd(dir, baseline.fsvd);
    save_csv_vector(dir + "/sigma_hat.csv", baseline.sigma_hat);
    save_csv_indices(dir + "/perm.csv", baseline.perm_by_magnitude);
}

BaselineTsvd load_baseline_tsvd(const std::string& dir) {
    const std::string mpath = dir + "/manifest.txt";
    const auto kv = parse_manifest(mpath);
    check_format(kv, mpath, "baseline_tsvd");
    BaselineTsvd baseline;
    baseline.n = need_count(kv, mpath, "n");
    const std::size_t n2 = baseline.n * baseline.n;
    baseline.fsvd = load_factor_svd(dir, baseline.n);
    baseline.sigma_hat =
        load_vector_sized(dir + "/sigma_hat.csv", n2, "sigma_hat");
    baseline.perm_by_magnitude = load_perm(dir + "/perm.csv", n2);
    return baseline;
}

SerializedStats serialized_stats(const std::string& dir) {
    SerializedStats stats;
    if (!fs::is_directory(dir)) throw Error(dir + " is not a directory");
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        if (p.extension() != ".csv") continue;
        const std::string text = read_file(p.string());
        std::size_t count = 0;
        bool in_token = false;
        for (char c : text) {
            const bool sep = c == ',' || c == '\n' || c == '\r';
            if (!sep && !in_token) {
                in_token = true;
                ++count;
            } else if (sep) {
                in_token = false;
            }
        }
        stats.per_file[p.filename().string()] = count;
        stats.total_values += count;
    }
    return stats;
}

} // namespace kronsvd
