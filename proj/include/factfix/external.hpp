// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstddef>
#include <cstring>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <fcntl.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "factfix/error.hpp"

// Batch protocol for external correctors. The child process reads one
// ExternalBatchItem per line on stdin and writes {"id", "corrected"} per line
// on stdout, in any order. Every id sent must come back exactly once.
namespace factfix::external {

inline constexpr std::string_view kSeparator = "\n<::SEP::>\n";

struct ExternalBatchItem {
    std::string id;
    std::string input_text;  // summary + kSeparator + document
    std::string summary;
    std::string document;

    static ExternalBatchItem make(std::string id, std::string summary, std::string document) {
        ExternalBatchItem item;
        item.id = std::move(id);
        item.input_text = summary + std::string(kSeparator) + document;
        item.summary = std::move(summary);
        item.document = std::move(document);
        return item;
    }
};

inline nlohmann::json item_to_json(const ExternalBatchItem& item) {
    return {{"id", item.id}, {"input_text", item.input_text}, {"summary", item.summary}, {"document", item.document}};
}

struct ExternalVerdict {
    std::string id;
    std::string corrected;
};

/// Parses one child output line. Throws ProtocolError naming the line.
inline ExternalVerdict parse_verdict_line(std::string_view line, std::size_t line_no) {
    const std::string where = "external corrector output line " + std::to_string(line_no);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(where + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw ProtocolError(where + ": expected a JSON object");
    const auto id = j.find("id");
    const auto corrected = j.find("corrected");
    if (id == j.end() || !id->is_string()) throw ProtocolError(where + ": missing string \"id\"");
    if (corrected == j.end() || !corrected->is_string()) throw ProtocolError(where + ": missing string \"corrected\"");
    return {id->get<std::string>(), corrected->get<std::string>()};
}

namespace detail {

struct Pipe {
    int fd[2] = {-1, -1};

    Pipe() {
        if (::pipe(fd) != 0) throw ExternalError("pipe() failed: " + std::string(std::strerror(errno)));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    Pipe(const Pipe&) = delete;
    Pipe& operator=(const Pipe&) = delete;

    void close_read() {
        if (fd[0] >= 0) ::close(fd[0]);
        fd[0] = -1;
    }
    void close_write() {
        if (fd[1] >= 0) ::close(fd[1]);
        fd[1] = -1;
    }
};

inline bool write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

inline std::string read_all(int fd) {
    std::string out;
    char buf[65536];
    for (;;) {
        const ssize_t n = ::read(fd, buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

}  // namespace detail

using ItemSource = std::function<std::optional<ExternalBatchItem>()>;

/// Runs `command` under /bin/sh, streams items from `next_item` to its stdin
/// and collects its verdicts. Returns verdicts in the child's output order.
/// Throws ExternalError on launch failure or nonzero exit (with the child's
/// stderr), ProtocolError on malformed, duplicate, unknown or missing ids.
inline std::vector<ExternalVerdict> run_process(const std::string& command, const ItemSource& next_item) {
    std::signal(SIGPIPE, SIG_IGN);
    detail::Pipe to_child;
    detail::Pipe from_child;
    detail::Pipe child_err;

    const pid_t pid = ::fork();
    if (pid < 0) throw ExternalError("fork() failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        ::dup2(to_child.fd[0], STDIN_FILENO);
        ::dup2(from_child.fd[1], STDOUT_FILENO);
        ::dup2(child_err.fd[1], STDERR_FILENO);
        for (int fd : {to_child.fd[0], to_child.fd[1], from_child.fd[0], from_child.fd[1], child_err.fd[0],
                       child_err.fd[1]}) {
            ::close(fd);
        }
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    to_child.close_read();
    from_child.close_write();
    child_err.close_write();

    std::unordered_set<std::string> sent;
    std::exception_ptr writer_error;
    std::string err_text;
    {
        std::jthread writer([&] {
            try {
                bool open = true;
                while (auto item = next_item()) {
                    if (!sent.insert(item->id).second) {
                        throw InputError("duplicate id \"" + item->id + "\" in corrector input");
                    }
                    if (open) open = detail::write_all(to_child.fd[1], item_to_json(*item).dump() + "\n");
                }
            } catch (...) {
                writer_error = std::current_exception();
            }
            to_child.close_write();
        });
        std::jthread err_reader([&] { err_text = detail::read_all(child_err.fd[0]); });
        std::string out_text = detail::read_all(from_child.fd[0]);
        writer.join();
        err_reader.join();

        int status = 0;
        while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
        }
        if (writer_error) std::rethrow_exception(writer_error);
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            const std::string how = WIFEXITED(status) ? "exited with status " + std::to_string(WEXITSTATUS(status))
                                                      : "was killed by a signal";
            throw ExternalError("external corrector `" + command + "` " + how + "; stderr:\n" + err_text);
        }

        std::vector<ExternalVerdict> verdicts;
        std::unordered_set<std::string> returned;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos < out_text.size()) {
            std::size_t eol = out_text.find('\n', pos);
            if (eol == std::string::npos) eol = out_text.size();
            std::string_view line(out_text.data() + pos, eol - pos);
            pos = eol + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
            ExternalVerdict v = parse_verdict_line(line, line_no);
            if (!sent.count(v.id)) {
                throw ProtocolError("external corrector output line " + std::to_string(line_no) + ": unknown id \"" +
                                    v.id + "\"");
            }
            if (!returned.insert(v.id).second) {
                throw ProtocolError("external corrector output line " + std::to_string(line_no) +
                                    ": duplicate id \"" + v.id + "\"");
            }
            verdicts.push_back(std::move(v));
        }
        if (returned.size() != sent.size()) {
            std::vector<std::string> missing;
            for (const std::string& id : sent) {
                if (!returned.count(id)) missing.push_back(id);
            }
            std::sort(missing.begin(), missing.end());
            throw ProtocolError("external corrector returned no verdict for id \"" + missing.front() + "\"" +
                                (missing.size() > 1 ? " and " + std::to_string(missing.size() - 1) + " more" : ""));
        }
        return verdicts;
    }
}

/// Convenience overload over an in-memory batch.
inline std::vector<ExternalVerdict> run_process(const std::string& command,
                                                const std::vector<ExternalBatchItem>& items) {
    std::size_t next = 0;
    return run_process(command, [&]() -> std::optional<ExternalBatchItem> {
        if (next == items.size()) return std::nullopt;
        return items[next++];
    });
}

}  // namespace factfix::external
