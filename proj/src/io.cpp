#include "modelspace/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace modelspace
{

namespace
{

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
    {
        fields.push_back(field);
    }
    return fields;
}

double parse_double(const std::string& text, int line_no)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() && text.find_first_not_of(" \t\r", used) !=
                                       std::string::npos)
        {
            throw std::invalid_argument(text);
        }
        return v;
    }
    catch (const std::exception&)
    {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                               ": bad number \"" + text + "\"");
    }
}

long parse_index(const std::string& text, int line_no)
{
    const double v = parse_double(text, line_no);
    if (v != std::floor(v))
    {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                               ": expected an integer");
    }
    return static_cast<long>(v);
}

} // namespace

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m)
{
    out << m.rows() << ',' << m.cols() << '\n';
    for (Eigen::Index j = 0; j < m.rows(); ++j)
    {
        for (Eigen::Index k = 0; k < m.cols(); ++k)
        {
            out << j << ',' << k << ',' << format_double(m(j, k).real()) << ','
                << format_double(m(j, k).imag()) << '\n';
        }
    }
}

std::string matrix_to_csv(const ComplexMatrix& m)
{
    std::ostringstream out;
    write_matrix_csv(out, m);
    return out.str();
}

ComplexMatrix read_matrix_csv(std::istream& in)
{
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line))
    {
        throw Error(ErrorCode::ParseError, "empty matrix file");
    }
    auto header = split_fields(line);
    if (header.size() != 2)
    {
        throw Error(ErrorCode::ParseError, "line 1: expected \"rows,cols\"");
    }
    const long rows = parse_index(header[0], line_no);
    const long cols = parse_index(header[1], line_no);
    if (rows < 1 || cols < 1)
    {
        throw Error(ErrorCode::ParseError, "line 1: dimensions must be positive");
    }

    ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
        {
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != 4)
        {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                                   ": expected \"row,col,re,im\"");
        }
        const long j = parse_index(fields[0], line_no);
        const long k = parse_index(fields[1], line_no);
        if (j < 0 || j >= rows || k < 0 || k >= cols)
        {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                                   ": entry index out of range");
        }
        m(j, k) = Complex(parse_double(fields[2], line_no),
                          parse_double(fields[3], line_no));
    }
    return m;
}

ComplexMatrix read_matrix_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return read_matrix_csv(in);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
        {
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out)
        {
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::IoError,
                    "cannot rename onto " + path.string() + ": " + ec.message());
    }
}

} // namespace modelspace
