#pragma once

// Remote age resolvers: WHOIS (port 43) and the web-archive availability
// endpoint. Online-mode plumbing only; nothing in the pipeline or tests
// depends on these succeeding.

#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "misinfo/domain_age.hpp"

namespace misinfo::age {

namespace detail {

inline std::optional<std::string> tcp_text_query(const std::string& host, int port,
                                                 const std::string& request, int timeout_sec = 10) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0) return std::nullopt;
    int fd = -1;
    for (addrinfo* p = res; p; p = p->ai_next) {
        fd = ::socket(p->ai_family, p->ai_socktype, p->ai_protocol);
        if (fd < 0) continue;
        timeval tv{timeout_sec, 0};
        setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
        setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
        if (::connect(fd, p->ai_addr, p->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    freeaddrinfo(res);
    if (fd < 0) return std::nullopt;
    std::string out;
    if (::send(fd, request.data(), request.size(), 0) == static_cast<ssize_t>(request.size())) {
        char buf[4096];
        ssize_t n;
        while ((n = ::recv(fd, buf, sizeof(buf), 0)) > 0) out.append(buf, static_cast<std::size_t>(n));
    }
    ::close(fd);
    if (out.empty()) return std::nullopt;
    return out;
}

// Pulls the first plausible 4-digit year following a creation/registration
// field name in a WHOIS text blob.
inline std::optional<int> parse_whois_year(const std::string& text) {
    static const char* kFields[] = {"creation date", "created", "registered on",
                                    "registration date", "domain registration date"};
    const std::string lower = to_lower_ascii(text);
    for (const char* field : kFields) {
        std::size_t pos = lower.find(field);
        while (pos != std::string::npos) {
            const std::size_t end = std::min(lower.find('\n', pos), lower.size());
            for (std::size_t i = pos; i + 4 <= end; ++i) {
                if (is_ascii_digit(lower[i]) && is_ascii_digit(lower[i + 1]) &&
                    is_ascii_digit(lower[i + 2]) && is_ascii_digit(lower[i + 3])) {
                    const int year = std::stoi(lower.substr(i, 4));
                    if (year >= 1985 && year <= current_year_utc()) return year;
                }
            }
            pos = lower.find(field, pos + 1);
        }
    }
    return std::nullopt;
}

inline std::string whois_server_for(const std::string& domain) {
    const auto dot = domain.rfind('.');
    const std::string tld = dot == std::string::npos ? domain : domain.substr(dot + 1);
    if (tld == "com" || tld == "net") return "whois.verisign-grs.com";
    if (tld == "org") return "whois.pir.org";
    return "whois.iana.org";
}

}  // namespace detail

inline std::optional<AgeRecord> whois_lookup(const std::string& domain) {
    std::string server = detail::whois_server_for(domain);
    auto reply = detail::tcp_text_query(server, 43, domain + "\r\n");
    if (!reply) return std::nullopt;
    if (server == "whois.iana.org") {
        // Follow a single referral if IANA points at the registry server.
        const std::string lower = to_lower_ascii(*reply);
        if (const auto pos = lower.find("refer:"); pos != std::string::npos) {
            const std::size_t end = std::min(lower.find('\n', pos), lower.size());
            std::string referred = lower.substr(pos + 6, end - pos - 6);
            referred.erase(0, referred.find_first_not_of(" \t"));
            referred.erase(referred.find_last_not_of(" \t\r") + 1);
            if (!referred.empty()) {
                if (auto second = detail::tcp_text_query(referred, 43, domain + "\r\n")) reply = second;
            }
        }
    }
    const auto year = detail::parse_whois_year(*reply);
    if (!year) return std::nullopt;
    return AgeRecord{domain, *year, AgeSource::whois, now_iso8601_utc()};
}

inline std::optional<AgeRecord> wayback_lookup(const std::string& domain) {
    httplib::Client client("http://archive.org");
    client.set_connection_timeout(10);
    client.set_read_timeout(10);
    const auto res = client.Get("/wayback/available?url=" + domain + "&timestamp=19850101");
    if (!res || res->status != 200) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(res->body);
        const auto& closest = j.at("archived_snapshots").at("closest");
        const auto ts = closest.at("timestamp").get<std::string>();
        if (ts.size() < 4) return std::nullopt;
        const int year = std::stoi(ts.substr(0, 4));
        if (year < 1985 || year > current_year_utc()) return std::nullopt;
        return AgeRecord{domain, year, AgeSource::wayback, now_iso8601_utc()};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Queries both services; the earlier year wins and the source records the
// winner (earliest evidence of existence).
inline std::optional<AgeRecord> combined_lookup(const std::string& domain) {
    const auto whois = whois_lookup(domain);
    const auto wayback = wayback_lookup(domain);
    if (whois && wayback) return whois->year <= wayback->year ? whois : wayback;
    return whois ? whois : wayback;
}

}  // namespace misinfo::age
