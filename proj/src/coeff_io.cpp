#include "bogent/coeff_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bogent {

namespace {

constexpr const char* kMagic = "# bogent-coefficients 1";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_matrix(const CMatrix& m, std::ostream& out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            out << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag());
        }
        out << '\n';
    }
}

[[noreturn]] void malformed(int line, const std::string& what) {
    throw std::invalid_argument("coefficient file, line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
        malformed(line, "invalid number '" + token + "'");
    }
    return v;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty line, split into tokens. Comment lines are skipped.
    std::vector<std::string> next(const char* expect) {
        std::string text;
        while (std::getline(in_, text)) {
            ++line_;
            if (!text.empty() && text.back() == '\r') text.pop_back();
            if (text.empty() || text.front() == '#') continue;
            std::istringstream ss(text);
            std::vector<std::string> tokens;
            for (std::string t; ss >> t;) tokens.push_back(t);
            if (!tokens.empty()) return tokens;
        }
        malformed(line_, std::string("unexpected end of file, expected ") + expect);
    }

    int line() const { return line_; }

private:
    std::istream& in_;
    int line_ = 0;
};

CMatrix read_rows(LineReader& reader, const char* name, int m) {
    CMatrix out(m, m);
    for (int i = 0; i < m; ++i) {
        auto row = reader.next("matrix row");
        if (row.size() != 2 * static_cast<std::size_t>(m)) {
            malformed(reader.line(), std::string(name) + " row has " + std::to_string(row.size() / 2) +
                                         " entries, expected " + std::to_string(m));
        }
        for (int j = 0; j < m; ++j) {
            out(i, j) = Complex(parse_double(row[2 * j], reader.line()),
                                parse_double(row[2 * j + 1], reader.line()));
        }
    }
    return out;
}

}  // namespace

void write_coeffs(const BogoCoeffs& c, std::ostream& out) {
    out << kMagic << '\n';
    out << "modes";
    for (ModeLabel m : c.modes()) out << ' ' << m;
    out << '\n';
    out << "M " << c.size() << '\n';
    if (c.is_exact()) {
        out << "order_tag exact\n";
        out << "h_value " << format_double(c.h_value().value_or(0.0)) << '\n';
        out << "identity_tolerance " << format_double(c.identity_tolerance()) << '\n';
    } else {
        out << "order_tag series:" << *c.series_order() << '\n';
    }
    out << "alpha\n";
    write_matrix(c.alpha(), out);
    out << "beta\n";
    write_matrix(c.beta(), out);
}

void write_coeffs(const BogoCoeffs& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    write_coeffs(c, out);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

BogoCoeffs read_coeffs(std::istream& in) {
    LineReader reader(in);

    auto modes_line = reader.next("modes");
    if (modes_line[0] != "modes" || modes_line.size() < 2) malformed(reader.line(), "expected 'modes'");
    std::vector<ModeLabel> modes;
    for (std::size_t i = 1; i < modes_line.size(); ++i) {
        const double v = parse_double(modes_line[i], reader.line());
        if (v != static_cast<int>(v)) malformed(reader.line(), "mode labels must be integers");
        modes.push_back(static_cast<int>(v));
    }

    auto m_line = reader.next("M");
    if (m_line.size() != 2 || m_line[0] != "M") malformed(reader.line(), "expected 'M <count>'");
    const double m_value = parse_double(m_line[1], reader.line());
    if (m_value != static_cast<double>(modes.size())) {
        malformed(reader.line(), "M does not match the number of mode labels");
    }
    const int m = static_cast<int>(modes.size());

    auto tag_line = reader.next("order_tag");
    if (tag_line.size() != 2 || tag_line[0] != "order_tag") malformed(reader.line(), "expected 'order_tag'");
    const std::string& tag = tag_line[1];
    std::optional<int> order;
    double h_value = 0.0;
    double identity_tol = BogoCoeffs::kExactIdentityTolerance;
    if (tag == "exact") {
        auto h_line = reader.next("h_value");
        if (h_line.size() != 2 || h_line[0] != "h_value") malformed(reader.line(), "expected 'h_value'");
        h_value = parse_double(h_line[1], reader.line());
    } else if (tag.rfind("series:", 0) == 0) {
        const double k = parse_double(tag.substr(7), reader.line());
        if (k < 0 || k != static_cast<int>(k)) malformed(reader.line(), "invalid series order");
        order = static_cast<int>(k);
    } else {
        malformed(reader.line(), "unknown order_tag '" + tag + "'");
    }

    // Optional tolerance line precedes the alpha block.
    auto next = reader.next("alpha");
    if (next[0] == "identity_tolerance") {
        if (next.size() != 2 || order) malformed(reader.line(), "misplaced 'identity_tolerance'");
        identity_tol = parse_double(next[1], reader.line());
        next = reader.next("alpha");
    }
    if (next.size() != 1 || next[0] != "alpha") malformed(reader.line(), "expected 'alpha'");

    CMatrix alpha = read_rows(reader, "alpha", m);
    auto beta_header = reader.next("beta");
    if (beta_header.size() != 1 || beta_header[0] != "beta") malformed(reader.line(), "expected 'beta'");
    CMatrix beta = read_rows(reader, "beta", m);

    std::string trailing;
    while (std::getline(in, trailing)) {
        if (trailing.find_first_not_of(" \t\r") != std::string::npos) {
            malformed(reader.line() + 1, "unexpected content after beta block");
        }
    }

    if (order) return BogoCoeffs::series(std::move(modes), std::move(alpha), std::move(beta), *order);
    return BogoCoeffs::exact(std::move(modes), std::move(alpha), std::move(beta), h_value, identity_tol);
}

BogoCoeffs read_coeffs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open coefficient file '" + path + "'");
    return read_coeffs(in);
}

}  // namespace bogent
