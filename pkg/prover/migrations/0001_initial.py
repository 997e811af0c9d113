# Generated by Django 5.2.7

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ProverSetting',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('key', models.CharField(help_text='설정 항목 이름. 예: PROVER_DEFAULT_TIMEOUT', max_length=100, unique=True)),
                ('value', models.TextField(blank=True, help_text='설정 값 (문자열로 저장. true/false/숫자도 문자열로 저장)')),
                ('description', models.CharField(blank=True, help_text='사람이 읽는 설명', max_length=255)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'verbose_name': '증명기 설정값',
                'verbose_name_plural': '증명기 설정값들',
            },
        ),
        migrations.CreateModel(
            name='ProofRunLog',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, help_text='로그 생성 시각')),
                ('source_text', models.CharField(blank=True, default='', help_text="어디서 실행했는지. 예: 'cli', 'api', 'bench'", max_length=32)),
                ('problem', models.CharField(blank=True, default='', help_text='문제 파일 경로 또는 라벨', max_length=512)),
                ('mode_text', models.CharField(blank=True, default='', help_text="사용한 모드 이름 또는 'schedule'", max_length=128)),
                ('status', models.CharField(blank=True, default='', help_text='SZS 상태: Theorem / GaveUp / Timeout / Error', max_length=32)),
                ('ok_flag', models.BooleanField(default=True, help_text='Theorem 이면 True')),
                ('steps', models.IntegerField(default=0, help_text='디스패치된 커맨드 수')),
                ('millis', models.IntegerField(default=0, help_text='경과 시간(ms)')),
                ('extra_json', models.JSONField(blank=True, default=dict, help_text='에러 메시지, 슬라이스별 결과 등 자유롭게')),
            ],
            options={
                'verbose_name': '증명 실행 기록',
                'verbose_name_plural': '증명 실행 기록들',
                'ordering': ['-created_at'],
            },
        ),
    ]
