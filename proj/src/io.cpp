#include "noderank/io.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <system_error>

#include "noderank/graph.hpp"

namespace noderank::io {

std::string read_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw DataError("cannot open '" + path.string() + "': no such file");
    }
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::string content;
    char buffer[1 << 16];
    for (;;) {
        const int n = gzread(file, buffer, sizeof(buffer));
        if (n < 0) {
            int code = 0;
            const std::string msg = gzerror(file, &code);
            gzclose(file);
            throw DataError("error reading '" + path.string() + "': " + msg);
        }
        if (n == 0) break;
        content.append(buffer, static_cast<std::size_t>(n));
    }
    gzclose(file);
    return content;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
    }
}

std::string format_real(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

}  // namespace noderank::io
