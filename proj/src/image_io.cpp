#include "ganlab/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ganlab/errors.hpp"

namespace ganlab::data {

using engine::Shape;
using engine::Tensor;

namespace {

// Reads the next PNM header token, skipping whitespace and # comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
    return tok;
}

std::size_t parse_size(const std::string& tok, const std::string& path) {
    if (tok.empty()) throw ConfigError("truncated header in " + path);
    return static_cast<std::size_t>(std::stoull(tok));
}

}  // namespace

PnmImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open image: " + path);
    const std::string magic = next_token(in);
    bool binary;
    std::size_t channels;
    if (magic == "P2") {
        binary = false;
        channels = 1;
    } else if (magic == "P3") {
        binary = false;
        channels = 3;
    } else if (magic == "P5") {
        binary = true;
        channels = 1;
    } else if (magic == "P6") {
        binary = true;
        channels = 3;
    } else {
        throw ConfigError("unsupported PNM magic '" + magic + "' in " + path);
    }
    PnmImage img;
    img.channels = channels;
    img.width = parse_size(next_token(in), path);
    img.height = parse_size(next_token(in), path);
    const std::size_t maxval = parse_size(next_token(in), path);
    if (maxval == 0 || maxval > 255) throw ConfigError("unsupported maxval in " + path);
    const std::size_t count = img.width * img.height * channels;
    img.pixels.resize(count);
    if (binary) {
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw ConfigError("truncated pixel data in " + path);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string tok = next_token(in);
            if (tok.empty()) throw ConfigError("truncated pixel data in " + path);
            const std::size_t v = parse_size(tok, path);
            if (v > maxval) throw ConfigError("pixel out of range in " + path);
            img.pixels[i] = static_cast<unsigned char>(v);
        }
    }
    if (maxval != 255) {
        for (unsigned char& p : img.pixels) {
            p = static_cast<unsigned char>(std::lround(255.0 * p / static_cast<double>(maxval)));
        }
    }
    return img;
}

void write_pnm(const std::string& path, const PnmImage& image, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write image: " + path);
    const char* magic = image.channels == 3 ? (binary ? "P6" : "P3") : (binary ? "P5" : "P2");
    out << magic << "\n" << image.width << " " << image.height << "\n255\n";
    if (binary) {
        out.write(reinterpret_cast<const char*>(image.pixels.data()),
                  static_cast<std::streamsize>(image.pixels.size()));
    } else {
        for (std::size_t i = 0; i < image.pixels.size(); ++i) {
            out << static_cast<unsigned>(image.pixels[i])
                << ((i + 1) % 12 == 0 ? '\n' : ' ');
        }
        out << '\n';
    }
}

Tensor image_to_tensor(const PnmImage& image) {
    Tensor t(Shape{image.channels, image.height, image.width});
    for (std::size_t c = 0; c < image.channels; ++c) {
        for (std::size_t y = 0; y < image.height; ++y) {
            for (std::size_t x = 0; x < image.width; ++x) {
                const unsigned char p =
                    image.pixels[(y * image.width + x) * image.channels + c];
                t[(c * image.height + y) * image.width + x] = p / 127.5 - 1.0;
            }
        }
    }
    return t;
}

PnmImage tensor_to_image(const Tensor& chw) {
    if (chw.ndim() != 3) throw ShapeError("tensor_to_image: expected [c,h,w]");
    PnmImage img;
    img.channels = chw.shape()[0];
    img.height = chw.shape()[1];
    img.width = chw.shape()[2];
    if (img.channels != 1 && img.channels != 3) {
        throw ShapeError("tensor_to_image: channels must be 1 or 3");
    }
    img.pixels.resize(img.width * img.height * img.channels);
    for (std::size_t c = 0; c < img.channels; ++c) {
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                double v = chw[(c * img.height + y) * img.width + x];
                v = std::clamp((v + 1.0) * 127.5, 0.0, 255.0);
                img.pixels[(y * img.width + x) * img.channels + c] =
                    static_cast<unsigned char>(std::lround(v));
            }
        }
    }
    return img;
}

Tensor resize_area(const Tensor& chw, std::size_t out_h, std::size_t out_w) {
    if (chw.ndim() != 3) throw ShapeError("resize_area: expected [c,h,w]");
    const std::size_t c = chw.shape()[0], h = chw.shape()[1], w = chw.shape()[2];
    Tensor out(Shape{c, out_h, out_w});
    for (std::size_t ch = 0; ch < c; ++ch) {
        for (std::size_t oy = 0; oy < out_h; ++oy) {
            const double y0 = static_cast<double>(oy) * h / out_h;
            const double y1 = static_cast<double>(oy + 1) * h / out_h;
            for (std::size_t ox = 0; ox < out_w; ++ox) {
                const double x0 = static_cast<double>(ox) * w / out_w;
                const double x1 = static_cast<double>(ox + 1) * w / out_w;
                double acc = 0.0, area = 0.0;
                for (std::size_t y = static_cast<std::size_t>(y0); y < h && y < y1; ++y) {
                    const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                    for (std::size_t x = static_cast<std::size_t>(x0); x < w && x < x1; ++x) {
                        const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                        acc += wy * wx * chw[(ch * h + y) * w + x];
                        area += wy * wx;
                    }
                }
                out[(ch * out_h + oy) * out_w + ox] = area > 0.0 ? acc / area : 0.0;
            }
        }
    }
    return out;
}

Dataset load_image_folder(const std::string& path, std::size_t target_side, LoadReport* report) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) throw ConfigError("not a directory: " + path);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Tensor> examples;
    std::size_t channels = 0;
    LoadReport local;
    for (const std::string& f : files) {
        try {
            PnmImage img = read_pnm(f);
            if (channels == 0) channels = img.channels;
            if (img.channels != channels) {
                throw ConfigError("mixed channel counts in folder");
            }
            Tensor t = resize_area(image_to_tensor(img), target_side, target_side);
            examples.push_back(std::move(t));
            local.paths.push_back(f);
            ++local.loaded;
        } catch (const ConfigError&) {
            ++local.skipped;
        }
    }
    if (examples.empty()) throw ConfigError("no readable images in " + path);
    if (report) *report = std::move(local);
    return Dataset::from_examples(std::move(examples), channels, "folder:" + path);
}

PnmImage sample_grid(const Tensor& samples, std::size_t channels, std::size_t side,
                     std::size_t grid_cols) {
    const std::size_t n = samples.rows();
    const std::size_t rows = (n + grid_cols - 1) / grid_cols;
    const std::size_t pad = 1;
    PnmImage img;
    img.channels = channels;
    img.width = grid_cols * (side + pad) + pad;
    img.height = rows * (side + pad) + pad;
    img.pixels.assign(img.width * img.height * channels, 32);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t gr = i / grid_cols, gc = i % grid_cols;
        for (std::size_t c = 0; c < channels; ++c) {
            for (std::size_t y = 0; y < side; ++y) {
                for (std::size_t x = 0; x < side; ++x) {
                    double v = samples.at(i, (c * side + y) * side + x);
                    v = std::clamp((v + 1.0) * 127.5, 0.0, 255.0);
                    const std::size_t py = pad + gr * (side + pad) + y;
                    const std::size_t px = pad + gc * (side + pad) + x;
                    img.pixels[(py * img.width + px) * channels + c] =
                        static_cast<unsigned char>(std::lround(v));
                }
            }
        }
    }
    return img;
}

PnmImage scatter_plot(const Tensor& points, std::size_t side) {
    PnmImage img;
    img.channels = 1;
    img.width = side;
    img.height = side;
    img.pixels.assign(side * side, 0);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const double x = std::clamp(points.at(i, 0), -1.0, 1.0);
        const double y = std::clamp(points.at(i, 1), -1.0, 1.0);
        const auto px = static_cast<std::size_t>((x + 1.0) / 2.0 * (side - 1));
        const auto py = static_cast<std::size_t>((1.0 - (y + 1.0) / 2.0) * (side - 1));
        unsigned char& p = img.pixels[py * side + px];
        p = static_cast<unsigned char>(std::min(255, p + 64));
    }
    return img;
}

}  // namespace ganlab::data
