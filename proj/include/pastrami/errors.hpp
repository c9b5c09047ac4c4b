#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pastrami {

/// Precondition or argument violation on a library operation.
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure (unreadable path, unwritable destination).
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Structured violation found while reading campaign data.
/// Carries the offending file, the 1-based row (when row-scoped) and the
/// validation rule that failed, so callers can report actionable messages.
struct ingest_error : std::runtime_error {
    std::string file;
    std::optional<std::size_t> row;
    std::string rule;

    ingest_error(std::string file_, std::optional<std::size_t> row_,
                 std::string rule_, const std::string& detail)
        : std::runtime_error(format(file_, row_, rule_, detail)),
          file(std::move(file_)),
          row(row_),
          rule(std::move(rule_)) {}

  private:
    static std::string format(const std::string& file, std::optional<std::size_t> row,
                              const std::string& rule, const std::string& detail) {
        std::string msg = file;
        if (row) msg += ":row " + std::to_string(*row);
        msg += ": rule \"" + rule + "\": " + detail;
        return msg;
    }
};

}  // namespace pastrami
