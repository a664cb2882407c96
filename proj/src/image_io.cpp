//
// PGM and CSV readers and writers with positioned parse errors.
//

#include "kronsvd/image_io.hpp"

#include "kronsvd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace kronsvd {

namespace {

struct Cursor {
    const std::string& path;
    const std::string& text;
    std::size_t pos = 0;
    std::size_t line = 1;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(path + ": line " + std::to_string(line) + ", byte " +
                         std::to_string(pos) + ": " + what);
    }
    bool at_end() const { return pos >= text.size(); }
    void advance() {
        if (text[pos] == '\n') ++line;
        ++pos;
    }
    // PGM header whitespace, including # comments to end of line.
    void skip_header_space() {
        while (!at_end()) {
            const char c = text[pos];
            if (c == '#') {
                while (!at_end() && text[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }
    unsigned long next_uint(const char* what) {
        skip_header_space();
        if (at_end()) fail(std::string("missing ") + what);
        unsigned long value = 0;
        const auto res =
            std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (res.ec != std::errc() || res.ptr == text.data() + pos)
            fail(std::string("expected unsigned integer for ") + what);
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return value;
    }
};

double parse_double_token(const std::string& path, std::size_t line,
                          const char* begin, const char* end) {
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r'))
        --end;
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError(path + ": line " + std::to_string(line) +
                         ": bad number '" + std::string(begin, end) + "'");
    return value;
}

std::string extension(const std::string& path) {
    return std::filesystem::path(path).extension().string();
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) throw Error("read failed: " + path);
    return std::move(buf).str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp(target);
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

DenseMatrix load_pgm(const std::string& path) {
    const std::string text = read_file(path);
    Cursor cur{path, text};
    cur.skip_header_space();
    if (text.size() - cur.pos < 2 || text[cur.pos] != 'P')
        cur.fail("missing PGM magic");
    const char kind = text[cur.pos + 1];
    if (kind != '2' && kind != '5') cur.fail("unsupported PGM type, want P2 or P5");
    cur.pos += 2;

    const unsigned long width = cur.next_uint("width");
    const unsigned long height = cur.next_uint("height");
    const unsigned long maxval = cur.next_uint("maxval");
    if (width == 0 || height == 0) cur.fail("zero image dimension");
    if (maxval == 0 || maxval > 65535) cur.fail("maxval out of range [1, 65535]");

    DenseMatrix img(height, width);
    const double scale = 1.0 / static_cast<double>(maxval);
    if (kind == '2') {
        for (unsigned long i = 0; i < height; ++i)
            for (unsigned long j = 0; j < width; ++j) {
                const unsigned long v = cur.next_uint("pixel");
                if (v > maxval) cur.fail("pixel exceeds maxval");
                img(i, j) = static_cast<double>(v) * scale;
            }
        cur.skip_header_space();
        if (!cur.at_end()) cur.fail("trailing content after pixel data");
    } else {
        if (cur.at_end() || (text[cur.pos] != ' ' && text[cur.pos] != '\t' &&
                             text[cur.pos] != '\r' && text[cur.pos] != '\n'))
            cur.fail("expected single whitespace before binary data");
        cur.advance();
        const std::size_t bytes_per = maxval > 255 ? 2 : 1;
        const std::size_t need = width * height * bytes_per;
        if (text.size() - cur.pos < need) cur.fail("truncated binary pixel data");
        const unsigned char* data =
            reinterpret_cast<const unsigned char*>(text.data() + cur.pos);
        for (unsigned long i = 0; i < height; ++i)
            for (unsigned long j = 0; j < width; ++j) {
                const std::size_t off = (i * width + j) * bytes_per;
                unsigned long v = data[off];
                if (bytes_per == 2) v = (v << 8) | data[off + 1];
                if (v > maxval) cur.fail("pixel exceeds maxval");
                img(i, j) = static_cast<double>(v) * scale;
            }
        if (text.size() - cur.pos > need) cur.fail("trailing bytes after pixel data");
    }
    return img;
}

void save_pgm(const std::string& path, const DenseMatrix& image, bool binary,
              unsigned maxval) {
    if (maxval == 0 || maxval > 65535)
        throw Error("save_pgm: maxval out of range [1, 65535]");
    const std::size_t rows = image.rows();
    const std::size_t cols = image.cols();
    std::string out;
    out += binary ? "P5" : "P2";
    out += '\n';
    out += std::to_string(cols) + ' ' + std::to_string(rows) + '\n';
    out += std::to_string(maxval) + '\n';
    const double scale = static_cast<double>(maxval);
    auto quantize = [scale, maxval](double v) -> unsigned {
        const double clamped = std::clamp(v, 0.0, 1.0);
        const double q = std::round(clamped * scale);
        return std::min(static_cast<unsigned>(q), maxval);
    };
    if (binary) {
        const bool wide = maxval > 255;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                const unsigned v = quantize(image(i, j));
                if (wide) out += static_cast<char>((v >> 8) & 0xff);
                out += static_cast<char>(v & 0xff);
            }
    } else {
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                if (j) out += ' ';
                out += std::to_string(quantize(image(i, j)));
            }
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

DenseMatrix load_csv_matrix(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::vector<double>> rows;
    std::size_t line = 1;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t eol = text.find('\n', start);
        if (eol == std::string::npos) eol = text.size();
        std::size_t len = eol - start;
        if (len > 0 && text[start + len - 1] == '\r') --len;
        if (len > 0) {
            std::vector<double> row;
            std::size_t field = start;
            const std::size_t end = start + len;
            while (true) {
                std::size_t comma = text.find(',', field);
                if (comma == std::string::npos || comma >= end) comma = end;
                row.push_back(parse_double_token(path, line, text.data() + field,
                                                 text.data() + comma));
                if (comma == end) break;
                field = comma + 1;
            }
            if (!rows.empty() && row.size() != rows.front().size())
                throw ParseError(path + ": line " + std::to_string(line) +
                                 ": expected " +
                                 std::to_string(rows.front().size()) +
                                 " fields, got " + std::to_string(row.size()));
            rows.push_back(std::move(row));
        }
        start = eol + 1;
        ++line;
    }
    if (rows.empty()) throw ParseError(path + ": empty CSV");
    DenseMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

void save_csv_matrix(const std::string& path, const DenseMatrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

DenseMatrix load_image(const std::string& path) {
    const std::string ext = extension(path);
    if (ext == ".pgm") return load_pgm(path);
    if (ext == ".csv") return load_csv_matrix(path);
    throw Error("load_image: unknown extension '" + ext + "', want .pgm or .csv");
}

void save_image(const std::string& path, const DenseMatrix& image) {
    const std::string ext = extension(path);
    if (ext == ".pgm") {
        save_pgm(path, image);
        return;
    }
    if (ext == ".csv") {
        save_csv_matrix(path, image);
        return;
    }
    throw Error("save_image: unknown extension '" + ext + "', want .pgm or .csv");
}

void save_csv_vector(const std::string& path, const std::vector<double>& v) {
    std::string out;
    for (double x : v) {
        out += format_double(x);
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<double> load_csv_vector(const std::string& path) {
    const DenseMatrix m = load_csv_matrix(path);
    if (m.cols() != 1)
        throw ParseError(path + ": expected one column, got " +
                         std::to_string(m.cols()));
    return m.values();
}

void save_csv_indices(const std::string& path, const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t x : v) {
        out += std::to_string(x);
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<std::size_t> load_csv_indices(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::size_t> out;
    std::size_t line = 1;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t eol = text.find('\n', start);
        if (eol == std::string::npos) eol = text.size();
        std::size_t len = eol - start;
        if (len > 0 && text[start + len - 1] == '\r') --len;
        if (len > 0) {
            std::size_t value = 0;
            const char* begin = text.data() + start;
            const auto res = std::from_chars(begin, begin + len, value);
            if (res.ec != std::errc() || res.ptr != begin + len)
                throw ParseError(path + ": line " + std::to_string(line) +
                                 ": bad index '" + text.substr(start, len) + "'");
            out.push_back(value);
        }
        start = eol + 1;
        ++line;
    }
    return out;
}

} // namespace kronsvd
