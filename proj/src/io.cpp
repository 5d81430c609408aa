#include "litho/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "litho/errors.hpp"

namespace litho {

namespace fs = std::filesystem;

void atomic_write_text(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) fail(ErrorCode::io_error, "cannot open for writing: " + tmp.string());
        out << content;
        if (!out) fail(ErrorCode::io_error, "write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io_error, "cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

void append_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

std::string field_header(int rows, int cols, double dx, double dy, bool cplx) {
    std::ostringstream h;
    h << "LITHOFIELD 1 " << rows << " " << cols << " ";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", dx);
    h << buf << " ";
    std::snprintf(buf, sizeof(buf), "%.17g", dy);
    h << buf << " " << (cplx ? "complex" : "real") << "\n";
    return h.str();
}

// tokenizer that tracks line numbers for error reporting
struct TokenReader {
    std::istringstream in;
    std::string path;
    int line = 1;

    TokenReader(std::string text, std::string p) : in(std::move(text)), path(std::move(p)) {}

    bool next(std::string& tok) {
        tok.clear();
        int ch;
        while ((ch = in.get()) != EOF) {
            if (std::isspace(ch)) {
                if (!tok.empty()) {
                    if (ch == '\n') in.unget(); // keep line attribution on the token's line
                    return true;
                }
                if (ch == '\n') ++line;
            } else {
                tok.push_back(char(ch));
            }
        }
        return !tok.empty();
    }

    [[noreturn]] void parse_fail(const std::string& what) const {
        fail(ErrorCode::parse_error, path + ":" + std::to_string(line) + ": " + what);
    }

    double next_double(const char* what) {
        std::string tok;
        if (!next(tok)) parse_fail(std::string("unexpected end of file, expected ") + what);
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) parse_fail("malformed number '" + tok + "'");
            return v;
        } catch (const std::exception&) {
            parse_fail("malformed number '" + tok + "'");
        }
    }

    long next_int(const char* what) {
        double v = next_double(what);
        long iv = long(v);
        if (double(iv) != v) parse_fail(std::string("expected integer for ") + what);
        return iv;
    }
};

} // namespace

void write_field(const std::string& path, const RealField& f, double dx_nm, double dy_nm) {
    std::string out = field_header(f.rows(), f.cols(), dx_nm, dy_nm, false);
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) {
            if (c) out += ' ';
            append_value(out, f(r, c));
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_field(const std::string& path, const ComplexField& f, double dx_nm, double dy_nm) {
    std::string out = field_header(f.rows(), f.cols(), dx_nm, dy_nm, true);
    for (int r = 0; r < f.rows(); ++r) {
        for (int c = 0; c < f.cols(); ++c) {
            if (c) out += ' ';
            append_value(out, f(r, c).real());
            out += ' ';
            append_value(out, f(r, c).imag());
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

FieldFile read_field(const std::string& path) {
    TokenReader tr(read_text_file(path), path);
    std::string tok;
    if (!tr.next(tok) || tok != "LITHOFIELD") tr.parse_fail("missing LITHOFIELD magic");
    if (tr.next_int("version") != 1) tr.parse_fail("unsupported version");
    FieldFile ff;
    ff.rows = int(tr.next_int("rows"));
    ff.cols = int(tr.next_int("cols"));
    if (ff.rows <= 0 || ff.cols <= 0) tr.parse_fail("non-positive dimensions");
    ff.dx_nm = tr.next_double("dx");
    ff.dy_nm = tr.next_double("dy");
    if (!tr.next(tok)) tr.parse_fail("missing value kind");
    if (tok == "real")
        ff.is_complex = false;
    else if (tok == "complex")
        ff.is_complex = true;
    else
        tr.parse_fail("value kind must be 'real' or 'complex'");

    const size_t count = size_t(ff.rows) * ff.cols;
    if (ff.is_complex) {
        ff.cplx = ComplexField(ff.rows, ff.cols);
        for (size_t i = 0; i < count; ++i) {
            double re = tr.next_double("value");
            double im = tr.next_double("value");
            ff.cplx[i] = complexd(re, im);
        }
    } else {
        ff.real = RealField(ff.rows, ff.cols);
        for (size_t i = 0; i < count; ++i) ff.real[i] = tr.next_double("value");
    }
    if (tr.next(tok)) tr.parse_fail("trailing data after " + std::to_string(count) + " values");
    return ff;
}

namespace {

int clamp255(double u) {
    double v = std::round(255.0 * std::min(1.0, std::max(0.0, u)));
    return int(v);
}

} // namespace

void write_pgm(const std::string& path, const RealField& u01, bool binary_format) {
    std::string out;
    if (binary_format) {
        out = "P5\n" + std::to_string(u01.cols()) + " " + std::to_string(u01.rows()) + "\n255\n";
        for (int r = 0; r < u01.rows(); ++r)
            for (int c = 0; c < u01.cols(); ++c) out.push_back(char(clamp255(u01(r, c))));
    } else {
        out = "P2\n" + std::to_string(u01.cols()) + " " + std::to_string(u01.rows()) + "\n255\n";
        for (int r = 0; r < u01.rows(); ++r) {
            for (int c = 0; c < u01.cols(); ++c) {
                if (c) out += ' ';
                out += std::to_string(clamp255(u01(r, c)));
            }
            out += '\n';
        }
    }
    atomic_write_text(path, out);
}

namespace {

// shared PNM header parsing (handles comments)
struct PnmReader {
    std::string text;
    size_t pos = 0;
    std::string path;

    [[noreturn]] void parse_fail(const std::string& what) const { fail(ErrorCode::parse_error, path + ": " + what); }

    void skip_ws_comments() {
        while (pos < text.size()) {
            if (std::isspace((unsigned char)text[pos]))
                ++pos;
            else if (text[pos] == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else
                break;
        }
    }

    long next_int() {
        skip_ws_comments();
        size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) parse_fail("expected integer");
        return std::stol(text.substr(start, pos - start));
    }
};

} // namespace

RealField read_pgm(const std::string& path) {
    PnmReader pr{read_text_file(path), 0, path};
    pr.skip_ws_comments();
    if (pr.text.compare(pr.pos, 2, "P2") != 0 && pr.text.compare(pr.pos, 2, "P5") != 0)
        pr.parse_fail("not a PGM (P2/P5) file");
    bool binary = pr.text[pr.pos + 1] == '5';
    pr.pos += 2;
    int cols = int(pr.next_int());
    int rows = int(pr.next_int());
    long maxval = pr.next_int();
    if (maxval <= 0 || maxval > 255) pr.parse_fail("unsupported maxval");
    RealField out(rows, cols);
    if (binary) {
        ++pr.pos; // single whitespace after maxval
        if (pr.pos + size_t(rows) * cols > pr.text.size()) pr.parse_fail("truncated pixel data");
        for (size_t i = 0; i < size_t(rows) * cols; ++i) out[i] = double((unsigned char)pr.text[pr.pos + i]) / maxval;
    } else {
        for (size_t i = 0; i < size_t(rows) * cols; ++i) out[i] = double(pr.next_int()) / maxval;
    }
    return out;
}

void write_pbm(const std::string& path, const RealField& indicator, bool binary_format) {
    std::string out;
    if (binary_format) {
        out = "P4\n" + std::to_string(indicator.cols()) + " " + std::to_string(indicator.rows()) + "\n";
        for (int r = 0; r < indicator.rows(); ++r) {
            unsigned char byte = 0;
            int nbits = 0;
            for (int c = 0; c < indicator.cols(); ++c) {
                byte = (unsigned char)((byte << 1) | (indicator(r, c) > 0.5 ? 1 : 0));
                if (++nbits == 8) {
                    out.push_back(char(byte));
                    byte = 0;
                    nbits = 0;
                }
            }
            if (nbits) out.push_back(char(byte << (8 - nbits)));
        }
    } else {
        out = "P1\n" + std::to_string(indicator.cols()) + " " + std::to_string(indicator.rows()) + "\n";
        for (int r = 0; r < indicator.rows(); ++r) {
            for (int c = 0; c < indicator.cols(); ++c) {
                if (c) out += ' ';
                out += indicator(r, c) > 0.5 ? '1' : '0';
            }
            out += '\n';
        }
    }
    atomic_write_text(path, out);
}

RealField read_pbm(const std::string& path) {
    PnmReader pr{read_text_file(path), 0, path};
    pr.skip_ws_comments();
    if (pr.text.compare(pr.pos, 2, "P1") != 0 && pr.text.compare(pr.pos, 2, "P4") != 0)
        pr.parse_fail("not a PBM (P1/P4) file");
    bool binary = pr.text[pr.pos + 1] == '4';
    pr.pos += 2;
    int cols = int(pr.next_int());
    int rows = int(pr.next_int());
    RealField out(rows, cols);
    if (binary) {
        ++pr.pos;
        const int rowbytes = (cols + 7) / 8;
        if (pr.pos + size_t(rows) * rowbytes > pr.text.size()) pr.parse_fail("truncated pixel data");
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                unsigned char byte = (unsigned char)pr.text[pr.pos + size_t(r) * rowbytes + c / 8];
                out(r, c) = (byte >> (7 - c % 8)) & 1 ? 1.0 : 0.0;
            }
    } else {
        for (size_t i = 0; i < size_t(rows) * cols; ++i) {
            pr.skip_ws_comments();
            if (pr.pos >= pr.text.size()) pr.parse_fail("truncated pixel data");
            char ch = pr.text[pr.pos++];
            if (ch != '0' && ch != '1') pr.parse_fail("PBM pixels must be 0 or 1");
            out[i] = ch == '1' ? 1.0 : 0.0;
        }
    }
    return out;
}

void write_diff_pgm(const std::string& path, const RealField& exposed, const RealField& target) {
    if (!exposed.same_shape(target)) fail(ErrorCode::grid_mismatch, "write_diff_pgm: shape mismatch");
    RealField levels(exposed.rows(), exposed.cols());
    for (size_t i = 0; i < levels.size(); ++i) {
        bool e = exposed[i] > 0.5, t = target[i] > 0.5;
        levels[i] = (e == t) ? 128.0 / 255.0 : (e ? 1.0 : 0.0);
    }
    write_pgm(path, levels);
}

} // namespace litho
