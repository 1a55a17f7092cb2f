#include "colorenh/image_io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

namespace colorenh {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f != nullptr) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return f;
}

[[noreturn]] void png_error_handler(png_structp, png_const_charp msg) {
    throw IoError(std::string("libpng: ") + msg);
}

void png_warning_handler(png_structp, png_const_charp) {}

// Skips whitespace and '#' comments, then parses one decimal header field.
int read_pnm_int(std::istream& in) {
    int c = in.peek();
    while (c != EOF) {
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
        c = in.peek();
    }
    int value = 0;
    if (!(in >> value)) {
        throw IoError("malformed PNM header");
    }
    return value;
}

}  // namespace

RgbImage read_png(const std::filesystem::path& path) {
    auto file = open_file(path, "rb");
    std::array<png_byte, 8> sig{};
    if (std::fread(sig.data(), 1, sig.size(), file.get()) != sig.size() ||
        png_sig_cmp(sig.data(), 0, sig.size()) != 0) {
        throw IoError("'" + path.string() + "' is not a PNG file");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                             png_warning_handler);
    if (png == nullptr) {
        throw IoError("png_create_read_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* p;
        png_infop* i;
        ~Guard() { png_destroy_read_struct(p, i, nullptr); }
    } guard{&png, &info};
    if (info == nullptr) {
        throw IoError("png_create_info_struct failed");
    }

    png_init_io(png, file.get());
    png_set_sig_bytes(png, static_cast<int>(sig.size()));
    png_read_info(png, info);

    const auto color_type = png_get_color_type(png, info);
    const auto bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) {
        png_set_strip_16(png);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3) {
        throw IoError("unexpected PNG row layout after transforms");
    }
    RgbImage img(width, height);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
        rows[y] = img.data().data() + static_cast<std::size_t>(y) * width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    return img;
}

void write_png(const RgbImage& img, const std::filesystem::path& path) {
    auto file = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                              png_warning_handler);
    if (png == nullptr) {
        throw IoError("png_create_write_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* p;
        png_infop* i;
        ~Guard() { png_destroy_write_struct(p, i); }
    } guard{&png, &info};
    if (info == nullptr) {
        throw IoError("png_create_info_struct failed");
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const auto data = img.data();
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(png, data.data() + static_cast<std::size_t>(y) * img.width() * 3);
    }
    png_write_end(png, nullptr);
}

RgbImage read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P6") {
        throw IoError("'" + path.string() + "' is not a binary PPM (P6)");
    }
    const int width = read_pnm_int(in);
    const int height = read_pnm_int(in);
    const int maxval = read_pnm_int(in);
    if (width < 1 || height < 1 || maxval != 255) {
        throw IoError("unsupported PPM header (need 8-bit, non-empty)");
    }
    in.get();  // single whitespace before raster
    std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size())) {
        throw IoError("truncated PPM raster in '" + path.string() + "'");
    }
    return RgbImage(width, height, std::move(data));
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.data().size()));
}

void write_pgm(const std::vector<std::uint8_t>& gray, int width, int height, int maxval,
               const std::filesystem::path& path) {
    if (gray.size() != static_cast<std::size_t>(width) * height) {
        throw InvalidInput("PGM raster size mismatch");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << "P5\n" << width << ' ' << height << '\n' << maxval << '\n';
    out.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
}

RgbImage read_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::array<char, 2> head{};
    probe.read(head.data(), 2);
    probe.close();
    if (head[0] == 'P' && head[1] == '6') {
        return read_ppm(path);
    }
    return read_png(path);
}

void write_image(const RgbImage& img, const std::filesystem::path& path) {
    if (path.extension() == ".ppm") {
        write_ppm(img, path);
    } else {
        write_png(img, path);
    }
}

}  // namespace colorenh
