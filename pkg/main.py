#!/usr/bin/env python3
"""
가상 매듭 다항식 도구 메인 실행 파일

사용법:
    python main.py jones "1,1,i,-1,i"
    python main.py tutte "(i,1,1)"
    python main.py family --id p_i_q --p 4 --q -3
    python main.py parity @kishino --z
    python main.py portrait --id ip_q --p 1:20 --q 2:20 --csv out.csv --svg out.svg
    python main.py --help  # 도움말 출력
"""

import functools
import json
import logging
import re
import sys
from pathlib import Path
from typing import Iterable, List, Optional

import click

# 프로젝트 루트 디렉토리를 Python 경로에 추가
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from config.settings import settings  # noqa: E402
from modules.conway import Integer, diagram_from_text, leaves, parse_conway, to_json, to_text  # noqa: E402
from modules.diagram import VirtualDiagram, diagram_stats, jones, kauffman_bracket  # noqa: E402
from modules.errors import StateSumTooLargeError, VkpError  # noqa: E402
from modules.families import (  # noqa: E402
    DIAGRAM_FAMILIES, FAMILY_IDS, FORMULA_FAMILIES, catalog_diagram,
    family_eval, family_jones, family_recursive, family_text, family_tutte,
)
from modules.laurent import LaurentPolynomial  # noqa: E402
from modules.parity import eval_flat, nontriviality_certificate, parity_bracket  # noqa: E402
from modules.portrait import PORTRAIT_FAMILIES, grid_summary, parse_range, portrait_grid  # noqa: E402
from modules.report_generator import ReportGenerator  # noqa: E402
from modules.selftest import run_selftest  # noqa: E402
from modules.tutte_graph import (  # noqa: E402
    graph_from_conway, match_unit, relative_tutte, tutte_to_bracket, tutte_to_jones,
)

GAUSS_PATTERN = re.compile(r'^\s*[OUV]\d')

logger = logging.getLogger(__name__)


def setup_logging(verbose: bool = False) -> None:
    """로깅 설정 (표준 출력은 결과 전용이므로 로그는 stderr로)"""
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.WARNING)
    format_str = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    logging.basicConfig(
        level=level,
        format=format_str,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


def handle_errors(command):
    """도메인 오류를 종료 코드로 변환 (한도 초과 2, 그 밖의 오류 1)"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.ClickException:
            raise
        except StateSumTooLargeError as e:
            click.echo(f"❌ 오류: {e}", err=True)
            sys.exit(2)
        except VkpError as e:
            click.echo(f"❌ 오류: {e}", err=True)
            sys.exit(1)
        except KeyboardInterrupt:
            click.echo("\n\n사용자에 의해 중단되었습니다.", err=True)
            sys.exit(1)
        except Exception as e:
            logger.error(f"예상치 못한 오류: {e}")
            click.echo(f"❌ 예상치 못한 오류가 발생했습니다: {e}", err=True)
            sys.exit(1)
    return wrapper


def read_expressions(expression: Optional[str], file: Optional[str]) -> List[str]:
    """인자 하나 또는 --file의 줄들 (빈 줄과 '#' 주석 제외)"""
    if file:
        with open(file, 'r', encoding='utf-8') as f:
            lines = [line.strip() for line in f]
        return [line for line in lines if line and not line.startswith('#')]
    if expression is None:
        raise click.UsageError("식을 인자로 주거나 --file을 지정하세요.")
    return [expression]


def load_diagram(text: str) -> VirtualDiagram:
    """'@이름'은 카탈로그, 'O1+ U2- ...'는 Gauss 코드, 그 밖은 Conway 표기"""
    text = text.strip()
    if text.startswith('@'):
        return catalog_diagram(text[1:])
    if GAUSS_PATTERN.match(text):
        return VirtualDiagram.from_gauss_code(text)
    return diagram_from_text(text)


def conway_text(text: str) -> str:
    text = text.strip()
    if text.startswith('@'):
        return family_text('candidate_knots', text[1:])
    return text


def emit(ctx: click.Context, text: str, payload) -> None:
    if ctx.obj['json']:
        click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        click.echo(text)


def emit_polynomials(ctx: click.Context, expressions: Iterable[str], compute, key: str) -> None:
    for expression in expressions:
        polynomial = compute(expression)
        emit(ctx, polynomial.to_text(), {'input': expression, key: polynomial.to_json()})


@click.group()
@click.option('--json', 'as_json', is_flag=True, help='JSON 형식으로 출력')
@click.option('--workers', type=int, default=None, help='워커 프로세스 수')
@click.option('--state-limit', type=int, default=None, help='상태합 교차점 한도')
@click.option('--verbose', '-v', is_flag=True, help='상세한 로그 출력')
@click.pass_context
def cli(ctx: click.Context, as_json: bool, workers: Optional[int], state_limit: Optional[int], verbose: bool):
    """
    가상 매듭 다항식 도구

    확장 Conway 표기의 가상 매듭/링크에 대해 상대 Tutte, Kauffman 브래킷, Jones,
    패리티 브래킷을 계산하고 패밀리 영점 포트레이트를 만듭니다.
    """
    setup_logging(verbose)
    settings.override(state_limit=state_limit, workers=workers)
    is_valid, message = settings.validate()
    if not is_valid:
        click.echo(f"❌ 설정 오류: {message}", err=True)
        sys.exit(1)
    ctx.ensure_object(dict)
    ctx.obj['json'] = as_json


@cli.command()
@click.argument('expression')
@click.pass_context
@handle_errors
def parse(ctx: click.Context, expression: str):
    """Conway 표기를 해석해 정규 문자열과 다이어그램 요약을 출력"""
    expr = parse_conway(expression)
    stats = diagram_stats(load_diagram(expression))
    text = (f"{to_text(expr)}\n"
            f"성분 {stats.components}, writhe {stats.writhe}, "
            f"고전 {stats.classical_count}, 가상 {stats.virtual_count}")
    emit(ctx, text, {'canonical': to_text(expr), 'ast': to_json(expr), 'stats': stats.to_dict()})


@cli.command()
@click.argument('expression', required=False)
@click.option('--file', 'file', type=click.Path(exists=True), help='한 줄에 식 하나씩 읽을 파일')
@click.option('--method', type=click.Choice(['contract', 'enumerate']), default='contract', help='상태합 방식')
@click.pass_context
@handle_errors
def bracket(ctx: click.Context, expression: Optional[str], file: Optional[str], method: str):
    """Kauffman 브래킷 (상태합)"""
    emit_polynomials(
        ctx, read_expressions(expression, file),
        lambda text: kauffman_bracket(load_diagram(text), method=method), 'bracket',
    )


@cli.command('jones')
@click.argument('expression', required=False)
@click.option('--file', 'file', type=click.Path(exists=True), help='한 줄에 식 하나씩 읽을 파일')
@click.option('--no-normalize', is_flag=True, help='writhe 보정 없이 브래킷에 바로 대입')
@click.pass_context
@handle_errors
def jones_command(ctx: click.Context, expression: Optional[str], file: Optional[str], no_normalize: bool):
    """Jones 다항식 (상태합)"""
    emit_polynomials(
        ctx, read_expressions(expression, file),
        lambda text: jones(load_diagram(text), normalize=not no_normalize), 'jones',
    )


def _tutte_result(text: str, reduced: bool, output: str) -> LaurentPolynomial:
    expr = parse_conway(conway_text(text))
    if any(isinstance(leaf, Integer) and leaf.n < 0 for leaf in leaves(expr)):
        raise VkpError("음의 정수 잎은 그래프 엔진이 다루지 않습니다. 'vkp family' 또는 'vkp jones'를 사용하세요.")
    tutte = relative_tutte(graph_from_conway(expr), reduced=reduced)
    if output == 'tutte':
        return tutte

    # 그래프 브래킷과 상태합 브래킷 사이의 단위 ±A^(3k) 보정
    diagram = load_diagram(text)
    unit = match_unit(kauffman_bracket(diagram), tutte_to_bracket(tutte))
    if unit is None:
        raise VkpError("그래프 브래킷이 상태합 브래킷과 단위 차이로 맞지 않습니다.")
    image = tutte_to_jones(tutte, diagram.writhe, unit=unit)
    return image.bracket if output == 'bracket' else image.jones


@cli.command()
@click.argument('expression', required=False)
@click.option('--file', 'file', type=click.Path(exists=True), help='한 줄에 식 하나씩 읽을 파일')
@click.option('--reduced/--unreduced', default=True, help='매 단계 그래프 축약 여부')
@click.option('--as', 'output', type=click.Choice(['tutte', 'bracket', 'jones']), default='tutte')
@click.pass_context
@handle_errors
def tutte(ctx: click.Context, expression: Optional[str], file: Optional[str], reduced: bool, output: str):
    """그래프 엔진으로 계산한 상대 Tutte 다항식"""
    emit_polynomials(
        ctx, read_expressions(expression, file),
        lambda text: _tutte_result(text, reduced, output), output,
    )


@cli.command()
@click.option('--id', 'family', type=click.Choice(FAMILY_IDS), required=True, help='패밀리 이름')
@click.option('--p', type=int, default=None, help='첫째 매개변수')
@click.option('--q', type=int, default=None, help='둘째 매개변수')
@click.option('--name', default=None, help='candidate_knots 항목 이름')
@click.option('--form', type=click.Choice(['closed', 'recursive', 'graph']), default='closed')
@click.option('--as', 'output', type=click.Choice(['tutte', 'bracket', 'jones', 'conway']), default='tutte')
@click.pass_context
@handle_errors
def family(ctx: click.Context, family: str, p: Optional[int], q: Optional[int], name: Optional[str],
           form: str, output: str):
    """이름 붙은 패밀리 멤버의 다항식 또는 Conway 표기"""
    if family == 'candidate_knots':
        if not name:
            raise click.UsageError("candidate_knots에는 --name이 필요합니다.")
        params: tuple = (name,)
    else:
        params = tuple(value for value in (p, q) if value is not None)

    payload = {'family': family, 'params': list(params), 'form': form, 'as': output}
    if output == 'conway':
        text = family_text(family, *params)
        emit(ctx, text, {**payload, 'conway': text})
        return

    if family in FORMULA_FAMILIES:
        if form == 'recursive':
            tutte_value = family_recursive(family, *params)
        elif form == 'graph':
            tutte_value = family_tutte(family, *params)
        else:
            tutte_value = family_eval(family, *params)
        if output == 'tutte':
            result = tutte_value
        elif form == 'closed':
            result = family_jones(family, *params)[output]
        else:
            # 재귀식과 그래프 값도 닫힌 식과 같은 단위로 보정
            closed = family_jones(family, *params)
            if tutte_value != closed['tutte']:
                raise VkpError(f"{form} 값이 닫힌 식과 다릅니다: {family} {list(params)}")
            result = closed[output]
    elif family in DIAGRAM_FAMILIES or family == 'candidate_knots':
        if output == 'tutte':
            raise VkpError(f"{family}에는 상대 Tutte 닫힌 식이 없습니다. --as bracket|jones를 사용하세요.")
        if family == 'p_i_negq' and form == 'closed':
            result = family_jones(family, *params)[output]
        else:
            diagram = (catalog_diagram(name) if family == 'candidate_knots'
                       else load_diagram(family_text(family, *params)))
            result = kauffman_bracket(diagram) if output == 'bracket' else jones(diagram)
    else:
        raise VkpError(f"unknown family: {family}")

    emit(ctx, result.to_text(), {**payload, output: result.to_json()})


@cli.command()
@click.argument('expression', required=False)
@click.option('--file', 'file', type=click.Path(exists=True), help='한 줄에 식 하나씩 읽을 파일')
@click.option('--z', 'allow_z', is_flag=True, help='그래프 Z-이동 허용')
@click.option('--flat', is_flag=True, help='A = -1 대입 값 출력')
@click.option('--normalized', is_flag=True, help='스칼라 항을 d로 한 번 나눔')
@click.pass_context
@handle_errors
def parity(ctx: click.Context, expression: Optional[str], file: Optional[str], allow_z: bool,
           flat: bool, normalized: bool):
    """패리티 브래킷과 비자명성 판정"""
    for text in read_expressions(expression, file):
        pb = parity_bracket(load_diagram(text), allow_z=allow_z)
        certificate = nontriviality_certificate(pb).value
        payload = {'input': text, 'certificate': certificate, **pb.to_json(normalized)}
        if flat:
            payload['flat'] = eval_flat(pb, normalized)

        scalar = pb.normalized_scalar() if normalized else pb.scalar
        lines = [f"scalar: {scalar.to_text()}"]
        for code, coeff in sorted(pb.nodal_terms.items()):
            lines.append(f"[{code}]: {coeff.to_text()}")
        if flat:
            values = payload['flat']
            lines.append(f"flat scalar: {values['scalar_at_minus_1']}")
            for code, value in values['nodal_terms_at_minus_1'].items():
                lines.append(f"flat [{code}]: {value}")
        lines.append(f"certificate: {certificate}")
        emit(ctx, '\n'.join(lines), payload)


@cli.command()
@click.option('--id', 'family', type=click.Choice(PORTRAIT_FAMILIES), required=True, help='패밀리 이름')
@click.option('--p', 'p_range', default='1:20', help="p 범위 'a:b'")
@click.option('--q', 'q_range', default='2:20', help="q 범위 'a:b'")
@click.option('--of', 'of', type=click.Choice(['jones', 'bracket']), default='jones', help='영점을 구할 다항식')
@click.option('--csv', 'csv_path', type=click.Path(), default=None, help='CSV 출력 경로')
@click.option('--svg', 'svg_path', type=click.Path(), default=None, help='SVG 출력 경로')
@click.pass_context
@handle_errors
def portrait(ctx: click.Context, family: str, p_range: str, q_range: str, of: str,
             csv_path: Optional[str], svg_path: Optional[str]):
    """패밀리 Jones(또는 브래킷) 영점 포트레이트"""
    records = portrait_grid(family, parse_range(p_range), parse_range(q_range), of=of)

    generator = ReportGenerator()
    if not csv_path and not svg_path:
        csv_path, svg_path = generator.default_paths(settings.output_dir, family, of)
    if csv_path:
        generator.write_csv(records, csv_path)
    if svg_path:
        generator.write_svg(records, svg_path, title=f"{family} ({of}) p={p_range} q={q_range}")

    summary = grid_summary(records)
    text = (f"영점 {summary['records']}개, 영점이 있는 칸 {summary['cells_with_roots']}개\n"
            f"CSV: {csv_path or '-'}\nSVG: {svg_path or '-'}")
    emit(ctx, text, {**summary, 'csv': csv_path, 'svg': svg_path})


@cli.command()
@click.option('--quick', is_flag=True, help='작은 범위로 빠르게 검사')
@click.pass_context
@handle_errors
def selftest(ctx: click.Context, quick: bool):
    """닫힌 식, 재귀식, 상태합, 패리티, 포트레이트 대조 검사"""
    results = run_selftest(quick)
    if ctx.obj['json']:
        click.echo(json.dumps(
            [{'name': name, 'ok': ok, 'message': message} for name, ok, message in results],
            ensure_ascii=False, sort_keys=True,
        ))
    else:
        for name, ok, message in results:
            click.echo(f"{'✅' if ok else '❌'} {name}: {message}")
        passed = sum(1 for _, ok, _ in results if ok)
        click.echo(f"\n{passed}/{len(results)} 통과")
    if not all(ok for _, ok, _ in results):
        sys.exit(1)


if __name__ == '__main__':
    cli()
