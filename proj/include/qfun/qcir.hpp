#pragma once

#include "qfun/aig.hpp"
#include "qfun/error.hpp"
#include "qfun/prefix.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace qfun {

enum class QcirErrorKind { Syntax, UndefinedGate, RedefinedName, FreeVariable, CyclicGate };

const char* to_string(QcirErrorKind kind);

class QcirError : public Error {
public:
    QcirError(QcirErrorKind kind, std::size_t line, std::size_t column, const std::string& message);

    QcirErrorKind kind() const { return kind_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    QcirErrorKind kind_;
    std::size_t line_;
    std::size_t column_;
};

struct QcirProblem {
    Game game;
    std::map<std::string, NodeRef> gates;
};

/// Parses prenex QCIR-G14 (cleansed or symbolic identifiers; and/or of any
/// arity, xor, ite; case-insensitive keywords). Gates are lowered to binary
/// ANDs in `aig`; repeated quantifiers are merged into one block.
QcirProblem parse_qcir(std::string_view text, Aig& aig);

QcirProblem read_qcir_file(const std::filesystem::path& path, Aig& aig);

/// QCIR-G14 text for `g`; gates are named g<N>.
std::string print_qcir(const Aig& aig, const Game& g);

} // namespace qfun
