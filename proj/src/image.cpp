#include "needle/image.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace needle {

namespace {

constexpr std::int64_t kMaxDim = 1 << 20;
constexpr std::int64_t kMaxPixels = 1 << 28;

void check_dims(int w, int h) {
    if (w < 0 || h < 0 || w > kMaxDim || h > kMaxDim ||
        static_cast<std::int64_t>(w) * h > kMaxPixels) {
        throw std::invalid_argument("unreasonable image dimensions " +
                                    std::to_string(w) + "x" + std::to_string(h));
    }
}

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in, const std::filesystem::path& path) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) {
        throw std::runtime_error("truncated netpbm header in " + path.string());
    }
    return tok;
}

long parse_header_int(std::istream& in, const std::filesystem::path& path,
                      const char* what) {
    const std::string tok = next_token(in, path);
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size()) {
        throw std::runtime_error(std::string("bad netpbm ") + what + " '" + tok +
                                 "' in " + path.string());
    }
    return v;
}

void read_header(std::istream& in, const std::filesystem::path& path,
                 const char* magic, int& w, int& h) {
    const std::string m = next_token(in, path);
    if (m != magic) {
        throw std::runtime_error("bad magic '" + m + "' in " + path.string() +
                                 " (expected " + magic + ")");
    }
    const long lw = parse_header_int(in, path, "width");
    const long lh = parse_header_int(in, path, "height");
    const long maxval = parse_header_int(in, path, "maxval");
    if (maxval != 255) {
        throw std::runtime_error("unsupported maxval " + std::to_string(maxval) +
                                 " in " + path.string() + " (must be 255)");
    }
    check_dims(static_cast<int>(lw), static_cast<int>(lh));
    if (lw < 1 || lh < 1) {
        throw std::runtime_error("non-positive dimensions in " + path.string());
    }
    w = static_cast<int>(lw);
    h = static_cast<int>(lh);
    // exactly one whitespace byte separates maxval from the payload; it was
    // already consumed by the tokenizer.
}

}  // namespace

ImageGray::ImageGray(int w, int h, std::uint8_t fill) {
    check_dims(w, h);
    width = w;
    height = h;
    samples.assign(static_cast<std::size_t>(w) * h, fill);
}

bool operator==(const ImageGray& a, const ImageGray& b) {
    return a.width == b.width && a.height == b.height && a.samples == b.samples;
}

ImageRgb::ImageRgb(int w, int h) {
    check_dims(w, h);
    width = w;
    height = h;
    samples.assign(static_cast<std::size_t>(w) * h * 3, 0);
}

ImageRgb to_rgb(const ImageGray& gray) {
    ImageRgb out(gray.width, gray.height);
    for (std::size_t i = 0; i < gray.samples.size(); ++i) {
        out.samples[i * 3] = gray.samples[i];
        out.samples[i * 3 + 1] = gray.samples[i];
        out.samples[i * 3 + 2] = gray.samples[i];
    }
    return out;
}

ImageGray read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    int w = 0, h = 0;
    read_header(in, path, "P5", w, h);
    ImageGray img(w, h);
    in.read(reinterpret_cast<char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.samples.size())) {
        throw std::runtime_error("truncated pixel payload in " + path.string());
    }
    return img;
}

void write_pgm(const ImageGray& img, const std::filesystem::path& path) {
    if (img.width < 1 || img.height < 1) {
        throw std::invalid_argument("cannot write empty image to " + path.string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.samples.data()),
              static_cast<std::streamsize>(img.samples.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

ImageRgb read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    int w = 0, h = 0;
    read_header(in, path, "P6", w, h);
    ImageRgb img(w, h);
    in.read(reinterpret_cast<char*>(img.samples.data()),
            static_cast<std::streamsize>(img.samples.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.samples.size())) {
        throw std::runtime_error("truncated pixel payload in " + path.string());
    }
    return img;
}

void write_ppm(const ImageRgb& img, const std::filesystem::path& path) {
    if (img.width < 1 || img.height < 1) {
        throw std::invalid_argument("cannot write empty image to " + path.string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + path.string());
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.samples.data()),
              static_cast<std::streamsize>(img.samples.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace needle
