#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zxdb {

    class ZxError : public std::runtime_error {
    public:
        explicit ZxError(const std::string& msg): std::runtime_error(msg) {}
    };

    class UnknownNode : public ZxError {
    public:
        explicit UnknownNode(std::size_t id): ZxError("unknown node id " + std::to_string(id)) {}
    };

    class KindMismatch : public ZxError {
    public:
        using ZxError::ZxError;
    };

    // Raised when a duplicate edge has no resolution in the simple-graph table;
    // the diagram has to be normalised with to_graph_like first.
    class UnsupportedEdgeResolution : public ZxError {
    public:
        using ZxError::ZxError;
    };

    class BoundaryDegreeViolation : public ZxError {
    public:
        using ZxError::ZxError;
    };

    class StaleMatch : public ZxError {
    public:
        using ZxError::ZxError;
    };

    class GraphLikeRequired : public ZxError {
    public:
        using ZxError::ZxError;
    };

    class CapExceeded : public ZxError {
    public:
        using ZxError::ZxError;
    };

    class DimensionMismatch : public ZxError {
    public:
        using ZxError::ZxError;
    };

    // Malformed diagram JSON (structure, ids, kinds, phases, wiring).
    class FormatError : public ZxError {
    public:
        using ZxError::ZxError;
    };

    // Text-format errors carry the 1-based line number of the offending statement.
    class ParseError : public ZxError {
    public:
        ParseError(const std::string& msg, std::size_t line)
            : ZxError("line " + std::to_string(line) + ": " + msg), line_(line) {}

        [[nodiscard]] std::size_t line() const { return line_; }

    private:
        std::size_t line_;
    };

    class UnsupportedGate : public ParseError {
    public:
        UnsupportedGate(const std::string& name, std::size_t line)
            : ParseError("unsupported gate '" + name + "'", line), name_(name) {}

        [[nodiscard]] const std::string& name() const { return name_; }

    private:
        std::string name_;
    };

    class QubitIndexError : public ParseError {
    public:
        using ParseError::ParseError;
    };

} // namespace zxdb
