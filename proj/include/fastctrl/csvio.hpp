#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fastctrl/errors.hpp"

namespace fastctrl {

// CSV with `# key=value` comment headers carrying the resolved configuration.
// Bodies are deterministic; only the timestamp comment differs between runs.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw DomainError("CsvWriter: cannot open " + path);
    }

    void comment(const std::string& key, const std::string& value) {
        out_ << "# " << key << "=" << value << "\n";
    }
    void comment(const std::string& key, double value) {
        comment(key, format(value));
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            out_ << cols[i] << (i + 1 == cols.size() ? "\n" : ",");
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << cells[i] << (i + 1 == cells.size() ? "\n" : ",");
    }

    static std::string format(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return buf;
    }

  private:
    std::ofstream out_;
};

}  // namespace fastctrl
